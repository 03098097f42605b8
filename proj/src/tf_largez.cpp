#include "dftlab/tf_largez.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "dftlab/errors.hpp"
#include "dftlab/numerics.hpp"

namespace dftlab::tf {

namespace {

constexpr double kPi = std::numbers::pi;
const double kTailExponent = (std::sqrt(73.0) - 7.0) / 2.0;

using State = std::array<double, 2>;

double pow32(double v) { return v > 0.0 ? v * std::sqrt(v) : 0.0; }

// phi_uu = phi_u / u + 4 u phi^{3/2} with x = u^2; state (phi, phi_u).
State rhs_u(double u, const State& y) { return {y[1], y[1] / u + 4.0 * u * pow32(y[0])}; }

// d/ds with s = ln x; state (phi, p = x phi').
State rhs_s(double s, const State& y) {
  const double x = std::exp(s);
  return {y[1], y[1] + x * std::sqrt(x) * pow32(y[0])};
}

template <typename F>
State rk4(F&& f, double t, const State& y, double h) {
  auto add = [](const State& a, const State& b, double c) { return State{a[0] + c * b[0], a[1] + c * b[1]}; };
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, add(y, k1, 0.5 * h));
  const State k3 = f(t + 0.5 * h, add(y, k2, 0.5 * h));
  const State k4 = f(t + h, add(y, k3, h));
  return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

double series_phi(double b, double x) {
  const double sx = std::sqrt(x);
  return 1.0 + b * x + 4.0 / 3.0 * x * sx + 0.4 * b * x * x * sx + x * x * x / 3.0;
}

double series_dphi(double b, double x) {
  const double sx = std::sqrt(x);
  return b + 2.0 * sx + b * x * sx + x * x;
}

State launch(double b, double u0) {
  const double x0 = u0 * u0;
  return {series_phi(b, x0), 2.0 * u0 * series_dphi(b, x0)};
}

enum class Outcome { too_negative, too_shallow, undecided };

Outcome classify(double b, const ShootingOptions& o) {
  const double u0 = std::sqrt(o.x0);
  const double du = (std::sqrt(o.x_match) - u0) / static_cast<double>(o.steps);
  const double u_end = std::sqrt(o.x_far);
  State y = launch(b, u0);
  for (double u = u0; u < u_end; u += du) {
    y = rk4(rhs_u, u, y, du);
    if (y[0] < 0.0) return Outcome::too_negative;
    if (y[1] > 0.0) return Outcome::too_shallow;
  }
  return Outcome::undecided;
}

double tail_asymptote(double f, double x) { return 144.0 / (x * x * x) * (1.0 + f * std::pow(x, -kTailExponent)); }

double tail_asymptote_p(double f, double x) {
  const double xc = std::pow(x, -kTailExponent);
  return 144.0 / (x * x * x) * (-3.0 * (1.0 + f * xc) - kTailExponent * f * xc);
}

// Integrates the tail inward from x_far to x_match; returns the samples from
// the outside in.
std::vector<std::array<double, 3>> tail_profile(double f, const ShootingOptions& o) {
  const double s_far = std::log(o.x_far);
  const double h = (std::log(o.x_match) - s_far) / static_cast<double>(o.tail_steps);
  State y = {tail_asymptote(f, o.x_far), tail_asymptote_p(f, o.x_far)};
  std::vector<std::array<double, 3>> out;
  out.reserve(o.tail_steps + 1);
  out.push_back({o.x_far, y[0], y[1] / o.x_far});
  for (std::size_t i = 0; i < o.tail_steps; ++i) {
    const double s = s_far + h * static_cast<double>(i);
    y = rk4(rhs_s, s, y, h);
    const double x = (i + 1 == o.tail_steps) ? o.x_match : std::exp(s + h);
    out.push_back({x, y[0], y[1] / x});
  }
  return out;
}

void validate(const ShootingOptions& o) {
  if (!(o.x0 > 0.0) || !(o.x_match > o.x0) || !(o.x_far > o.x_match) || o.steps < 10 || o.tail_steps < 10)
    throw InvalidInput("solve_tf_atom: need 0 < x0 < x_match < x_far and at least 10 steps");
  // The tail form is only matched where it is already accurate.
  if (o.x_match < 10.0) throw InvalidInput("solve_tf_atom: x_match must be >= 10");
}

std::string format_power(double p) {
  if (p == 1.0) return "Z";
  const double thirds = p * 3.0;
  if (std::abs(p - std::round(p)) < 1e-12) return "Z^" + std::to_string(static_cast<long>(std::lround(p)));
  if (std::abs(thirds - std::round(thirds)) < 1e-12)
    return "Z^(" + std::to_string(static_cast<long>(std::lround(thirds))) + "/3)";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), p);
  return "Z^(" + std::string(buf.data(), end) + ")";
}

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) throw InvalidInput("cannot parse number '" + std::string(s) + "' in " + context);
  return v;
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

}  // namespace

double TFSolution::phi_at(double xv) const {
  if (xv <= 0.0) return 1.0;
  if (xv < x[1]) return series_phi(initial_slope, xv);
  if (xv >= x.back()) return tail_asymptote(tail_f, xv);
  const auto it = std::upper_bound(x.begin(), x.end(), xv);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double t = (xv - x[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * phi[i] + (t3 - 2 * t2 + t) * h * dphi[i] + (-2 * t3 + 3 * t2) * phi[i + 1] +
         (t3 - t2) * h * dphi[i + 1];
}

double TFSolution::dphi_at(double xv) const {
  if (xv <= 0.0) return initial_slope;
  if (xv < x[1]) return series_dphi(initial_slope, xv);
  if (xv >= x.back()) return tail_asymptote_p(tail_f, xv) / xv;
  const auto it = std::upper_bound(x.begin(), x.end(), xv);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double t = (xv - x[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * phi[i] + (-6 * t2 + 6 * t) * phi[i + 1]) / h + (3 * t2 - 4 * t + 1) * dphi[i] +
         (3 * t2 - 2 * t) * dphi[i + 1];
}

TFSolution solve_tf_atom(const ShootingOptions& o) {
  validate(o);
  double lo = -2.0;
  double hi = -1.0;
  if (classify(lo, o) != Outcome::too_negative || classify(hi, o) != Outcome::too_shallow)
    throw SolverError("solve_tf_atom: initial slope not bracketed by [-2, -1]");
  double b = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    b = 0.5 * (lo + hi);
    if (b == lo || b == hi) break;
    const Outcome c = classify(b, o);
    if (c == Outcome::undecided) break;
    (c == Outcome::too_negative ? lo : hi) = b;
  }

  TFSolution sol;
  sol.initial_slope = b;
  sol.x.push_back(0.0);
  sol.phi.push_back(1.0);
  sol.dphi.push_back(b);

  const double u0 = std::sqrt(o.x0);
  const double u1 = std::sqrt(o.x_match);
  const double du = (u1 - u0) / static_cast<double>(o.steps);
  State y = launch(b, u0);
  sol.x.push_back(o.x0);
  sol.phi.push_back(y[0]);
  sol.dphi.push_back(y[1] / (2.0 * u0));
  for (std::size_t i = 0; i < o.steps; ++i) {
    const double u = u0 + du * static_cast<double>(i);
    y = rk4(rhs_u, u, y, du);
    const double un = (i + 1 == o.steps) ? u1 : u + du;
    sol.x.push_back(un * un);
    sol.phi.push_back(y[0]);
    sol.dphi.push_back(y[1] / (2.0 * un));
  }

  // Match the inward tail to phi(x_match).
  const double target = sol.phi.back();
  auto mismatch = [&](double f) { return tail_profile(f, o).back()[1] - target; };
  double f_lo = -10.0;
  double f_hi = 10.0;
  for (int k = 0; k < 30 && mismatch(f_lo) * mismatch(f_hi) > 0.0; ++k) {
    f_lo *= 2.0;
    f_hi *= 2.0;
  }
  sol.tail_f = numerics::bisect(mismatch, f_lo, f_hi, 1e-13 * std::max(1.0, std::abs(f_hi)));
  const auto tail = tail_profile(sol.tail_f, o);
  for (auto it = tail.rbegin() + 1; it != tail.rend(); ++it) {
    sol.x.push_back((*it)[0]);
    sol.phi.push_back((*it)[1]);
    sol.dphi.push_back((*it)[2]);
  }
  return sol;
}

double tf_length(double z) { return 0.885341 * std::pow(z, -1.0 / 3.0); }

lieb_oxford::RadialDensity tf_density(const TFSolution& sol, double z, double x_min, double x_max,
                                      std::size_t points) {
  if (!(z > 0.0)) throw InvalidInput("tf_density: Z must be > 0");
  const double b = tf_length(z);
  const auto xs = lieb_oxford::log_grid(x_min, x_max, points);
  std::vector<double> r(xs.size());
  std::vector<double> n(xs.size());
  const double pref = z / (4.0 * kPi * b * b * b);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    r[i] = b * xs[i];
    n[i] = pref * pow32(sol.phi_at(xs[i]) / xs[i]);
  }
  lieb_oxford::RadialDensity d;
  try {
    d = lieb_oxford::from_grid(std::move(r), std::move(n), z, false, lieb_oxford::Family::tf_atom);
  } catch (const InvalidInput& e) {
    // A profile that does not carry Z electrons means the solve was too coarse.
    throw SolverError(std::string("tf_density: ") + e.what());
  }
  d.params = {{"Z", z}};
  return d;
}

lieb_oxford::RadialDensity zeta_scaled(const lieb_oxford::RadialDensity& d, double zeta) {
  if (!(zeta > 0.0)) throw InvalidInput("zeta_scaled: zeta must be > 0");
  const double c = std::cbrt(zeta);
  auto out = d;
  for (double& x : out.r) x /= c;
  for (double& v : out.n) v *= zeta * zeta;
  out.n_electrons *= zeta;
  out.tail_rate *= c;
  for (auto& [k, v] : out.params)
    if (k == "Z") v *= zeta;
  return out;
}

bool LeadingExchangeReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

LeadingExchangeReport verify_leading_exchange(const TFSolution& sol, const std::vector<double>& z_list,
                                              double tolerance) {
  LeadingExchangeReport rep;
  rep.tolerance = tolerance;
  double rmin = INFINITY;
  double rmax = -INFINITY;
  for (double z : z_list) {
    LeadingExchangeRow row;
    row.z = z;
    row.e_x_lda = lieb_oxford::lda_exchange(tf_density(sol, z));
    row.expected = -9.0 * kC2 / 11.0 * std::pow(z, 5.0 / 3.0);
    row.ratio = row.e_x_lda / row.expected;
    row.pass = std::abs(row.ratio - 1.0) <= tolerance;
    rmin = std::min(rmin, row.ratio);
    rmax = std::max(rmax, row.ratio);
    rep.rows.push_back(row);
  }
  rep.ratio_spread = rep.rows.empty() ? 0.0 : rmax - rmin;
  return rep;
}

double BasisTerm::operator()(double z) const {
  const double v = std::pow(z, power);
  return with_log ? v * std::log(z) : v;
}

std::string BasisTerm::name() const { return with_log ? format_power(power) + "*log(Z)" : format_power(power); }

BasisTerm parse_term(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '(' && c != ')' && c != '*') s.push_back(c);
  BasisTerm t;
  const std::string log_suffix = "logZ";
  if (s.size() > log_suffix.size() && s.ends_with(log_suffix)) {
    t.with_log = true;
    s.resize(s.size() - log_suffix.size());
  }
  if (s == "Z") return t;
  if (!s.starts_with("Z^")) throw InvalidInput("unrecognized basis term '" + text + "'");
  const std::string p = s.substr(2);
  const auto slash = p.find('/');
  if (slash == std::string::npos) {
    t.power = parse_double(p, "basis term '" + text + "'");
  } else {
    const double num = parse_double(std::string_view(p).substr(0, slash), "basis term '" + text + "'");
    const double den = parse_double(std::string_view(p).substr(slash + 1), "basis term '" + text + "'");
    if (den == 0.0) throw InvalidInput("zero denominator in basis term '" + text + "'");
    t.power = num / den;
  }
  if (!std::isfinite(t.power)) throw InvalidInput("non-finite power in basis term '" + text + "'");
  return t;
}

std::vector<BasisTerm> standard_basis() {
  return {{7.0 / 3.0, false}, {2.0, false}, {5.0 / 3.0, false}, {1.0, true}, {1.0, false}, {4.0 / 3.0, false}};
}

bool is_closed_shell(int z) {
  static constexpr std::array<int, 20> shells = {2,  4,  10, 12, 18, 20,  30,  36,  38,  48,
                                                 54, 56, 70, 80, 86, 88, 102, 112, 118, 120};
  return std::find(shells.begin(), shells.end(), z) != shells.end();
}

std::vector<DataPoint> closed_shell_filter(const std::vector<DataPoint>& data) {
  std::vector<DataPoint> out;
  for (const auto& p : data) {
    const double zr = std::round(p.z);
    if (p.z == zr && zr > 12.0 && is_closed_shell(static_cast<int>(zr))) out.push_back(p);
  }
  return out;
}

AsymptoticFit fit_asymptotics(std::vector<DataPoint> data, const std::vector<BasisTerm>& basis,
                              bool closed_shell_only) {
  if (basis.empty()) throw InvalidInput("fit_asymptotics: empty basis");
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (basis[i] == basis[j]) throw SingularFit("fit_asymptotics: repeated basis term " + basis[i].name());
  if (closed_shell_only) data = closed_shell_filter(data);
  for (const auto& p : data)
    if (!(p.z > 0.0) || !std::isfinite(p.value)) throw InvalidInput("fit_asymptotics: need Z > 0 and finite values");
  std::vector<double> zs;
  for (const auto& p : data) zs.push_back(p.z);
  std::sort(zs.begin(), zs.end());
  if (std::adjacent_find(zs.begin(), zs.end()) != zs.end()) throw InvalidInput("fit_asymptotics: repeated Z value");
  if (data.size() <= basis.size())
    throw InvalidInput("fit_asymptotics: " + std::to_string(data.size()) + " points for " +
                       std::to_string(basis.size()) + " terms; need more points than terms");

  const auto rows = static_cast<Eigen::Index>(data.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    y(i) = data[static_cast<std::size_t>(i)].value;
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = basis[static_cast<std::size_t>(j)](data[static_cast<std::size_t>(i)].z);
  }
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j)
    if (!(scale(j) > 0.0)) throw SingularFit("fit_asymptotics: basis term " + basis[static_cast<std::size_t>(j)].name() + " vanishes on the data");
  const Eigen::MatrixXd scaled = a * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  if (qr.rank() < cols) throw SingularFit("fit_asymptotics: design matrix is rank deficient");
  const Eigen::VectorXd x = qr.solve(y).cwiseQuotient(scale);

  AsymptoticFit fit;
  fit.basis = basis;
  fit.coefficients.assign(x.data(), x.data() + x.size());
  fit.residual = (a * x - y).norm();
  fit.data = std::move(data);
  fit.filter_applied = closed_shell_only;
  return fit;
}

std::vector<DataPoint> read_exchange_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int col_z = -1, col_ex = -1, col_lda = -1;
  std::size_t ncols = 0;
  std::vector<DataPoint> out;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split_csv(t);
    if (col_z < 0) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "Z") col_z = static_cast<int>(i);
        if (cells[i] == "e_x") col_ex = static_cast<int>(i);
        if (cells[i] == "e_x_lda") col_lda = static_cast<int>(i);
      }
      if (col_z < 0 || col_ex < 0 || col_lda < 0)
        throw InvalidInput("exchange CSV: header must name columns Z, e_x, e_x_lda (line " + std::to_string(line_no) + ")");
      ncols = cells.size();
      continue;
    }
    if (cells.size() != ncols)
      throw InvalidInput("exchange CSV: line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                         " fields, expected " + std::to_string(ncols));
    const std::string where = "exchange CSV line " + std::to_string(line_no);
    const double z = parse_double(cells[static_cast<std::size_t>(col_z)], where);
    const double ex = parse_double(cells[static_cast<std::size_t>(col_ex)], where);
    const double lda = parse_double(cells[static_cast<std::size_t>(col_lda)], where);
    out.push_back({z, ex - lda});
  }
  if (col_z < 0) throw InvalidInput("exchange CSV: missing header");
  return out;
}

std::vector<DataPoint> read_exchange_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot open " + path);
  return read_exchange_csv(f);
}

nlohmann::json to_json(const AsymptoticFit& fit) {
  nlohmann::json names = nlohmann::json::array();
  for (const auto& t : fit.basis) names.push_back(t.name());
  nlohmann::json j = {{"basis", names},
                      {"coefficients", fit.coefficients},
                      {"residual", fit.residual},
                      {"n_points", fit.data.size()},
                      {"filter_applied", fit.filter_applied}};
  // The Z log Z coefficient is -B'_X; compare it with 1/(4 pi^2).
  for (std::size_t i = 0; i < fit.basis.size(); ++i) {
    if (fit.basis[i] == BasisTerm{1.0, true}) {
      const auto bohr = bohr_coefficient();
      j["z_log_z"] = {{"b_x_prime", -fit.coefficients[i]},
                      {"one_over_4pi2", bohr.fit_reference},
                      {"ratio", -fit.coefficients[i] / bohr.fit_reference}};
    }
  }
  return j;
}

BohrCoefficient bohr_coefficient() {
  BohrCoefficient b;
  b.value = 1.0 / (3.0 * kPi * kPi);
  b.fit_reference = 1.0 / (4.0 * kPi * kPi);
  b.ratio = b.value / b.fit_reference;
  return b;
}

}  // namespace dftlab::tf
