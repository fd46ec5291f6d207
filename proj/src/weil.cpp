#include "wind/weil.hpp"

#include <json.hpp>

#include <cmath>
#include <numeric>

namespace wind {

namespace {

// common denominator and integer numerators of the doubled Gram entries, so
// bilinear angles reduce to integer arithmetic and a fixed root table
struct AngleTable {
  i64 den = 1;
  std::vector<std::vector<i64>> num;  // num[k][l] = 2 g_kl * den
  std::vector<Cplx> roots;            // roots[j] = e(-j/den)

  explicit AngleTable(const DiscriminantForm& d) {
    size_t k = d.mods.size();
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) {
        Rational two_g = Rational(2) * d.gram[i][j];
        den = std::lcm(den, two_g.den);
      }
    num.assign(k, std::vector<i64>(k, 0));
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) {
        Rational two_g = Rational(2) * d.gram[i][j];
        num[i][j] = checked_i64(i128(two_g.num) * (den / two_g.den));
      }
    roots.resize(den);
    for (i64 j = 0; j < den; ++j) roots[j] = e_of(Rational::make(-j, den));
  }

  // e(-(h, mu)) for coordinate tuples x, y
  Cplx pairing(const std::vector<i64>& x, const std::vector<i64>& y) const {
    i64 acc = 0;
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = 0; j < y.size(); ++j)
        acc = mod_pos(acc + mod_pos(num[i][j] % den * (x[i] % den) % den * (y[j] % den), den),
                      den);
    return roots[acc];
  }
};

Cplx ipow(Cplx z, i64 e) {
  if (e < 0) return ipow(Cplx(1, 0) / z, -e);
  Cplx out(1, 0), base = z;
  while (e) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

}  // namespace

i64 DiscriminantForm::order() const {
  i64 o = 1;
  for (i64 m : mods) o = checked_i64(mul_i128(o, m));
  return o;
}

std::vector<i64> DiscriminantForm::element(i64 idx) const {
  std::vector<i64> x(mods.size());
  for (size_t k = 0; k < mods.size(); ++k) {
    x[k] = idx % mods[k];
    idx /= mods[k];
  }
  return x;
}

i64 DiscriminantForm::index_of(std::vector<i64> coords) const {
  if (coords.size() != mods.size()) throw std::domain_error("coordinate arity mismatch");
  i64 idx = 0;
  for (size_t k = mods.size(); k-- > 0;) idx = idx * mods[k] + mod_pos(coords[k], mods[k]);
  return idx;
}

Rational DiscriminantForm::q_value(i64 idx) const {
  std::vector<i64> x = element(idx);
  Rational q(0);
  for (size_t i = 0; i < x.size(); ++i) {
    q += gram[i][i] * Rational(x[i]) * Rational(x[i]);
    for (size_t j = i + 1; j < x.size(); ++j)
      q += Rational(2) * gram[i][j] * Rational(x[i]) * Rational(x[j]);
  }
  return q.frac();
}

Rational DiscriminantForm::bilinear(i64 i, i64 j) const {
  std::vector<i64> x = element(i), y = element(j);
  Rational b(0);
  for (size_t k = 0; k < x.size(); ++k)
    for (size_t l = 0; l < y.size(); ++l)
      b += Rational(2) * gram[k][l] * Rational(x[k]) * Rational(y[l]);
  return b.frac();
}

i64 DiscriminantForm::neg(i64 idx) const {
  std::vector<i64> x = element(idx);
  for (size_t k = 0; k < x.size(); ++k) x[k] = mod_pos(-x[k], mods[k]);
  return index_of(x);
}

i64 DiscriminantForm::add(i64 i, i64 j) const {
  std::vector<i64> x = element(i), y = element(j);
  for (size_t k = 0; k < x.size(); ++k) x[k] = mod_pos(x[k] + y[k], mods[k]);
  return index_of(x);
}

DiscriminantForm discriminant_form_for_gamma0N(i64 N) {
  if (N < 1) throw std::domain_error("level must be positive");
  DiscriminantForm d;
  d.mods = {2 * N};
  d.gram = {{Rational::make(1, 4 * N)}};
  d.sig_plus = 2;
  d.sig_minus = 1;
  return d;
}

DiscriminantForm twisted_discriminant_form(i64 N, i64 delta) {
  if (N < 1) throw std::domain_error("level must be positive");
  if (delta >= 0 || !is_fundamental_discriminant(delta))
    throw std::domain_error("twist requires a negative fundamental discriminant");
  i64 D = -delta;
  DiscriminantForm d;
  d.mods = {D, 2 * N * D, D};
  d.gram.assign(3, std::vector<Rational>(3, Rational(0)));
  d.gram[1][1] = Rational::make(-1, 4 * N * D);
  // cross entry halved: the quadratic polynomial carries 2 g_02 a c = a c / D
  d.gram[0][2] = d.gram[2][0] = Rational::make(1, 2 * D);
  d.sig_plus = 1;
  d.sig_minus = 2;
  return d;
}

Eigen::VectorXcd rho_T(const DiscriminantForm& d) {
  i64 n = d.order();
  Eigen::VectorXcd out(n);
  for (i64 h = 0; h < n; ++h) out[h] = e_of(d.q_value(h));
  return out;
}

Eigen::MatrixXcd rho_S(const DiscriminantForm& d) {
  i64 n = d.order();
  AngleTable at(d);
  std::vector<std::vector<i64>> coords(n);
  for (i64 h = 0; h < n; ++h) coords[h] = d.element(h);
  Cplx scale = e_of(Rational::make(-(d.sig_plus - d.sig_minus), 8)) / std::sqrt(Real(n));
  Eigen::MatrixXcd out(n, n);
  for (i64 h = 0; h < n; ++h)
    for (i64 mu = 0; mu < n; ++mu) out(h, mu) = scale * at.pairing(coords[h], coords[mu]);
  return out;
}

VVVector rho_S_apply(const DiscriminantForm& d, const VVVector& v) {
  i64 n = d.order();
  if (v.size() != n) throw std::domain_error("vector size does not match the module order");
  AngleTable at(d);
  std::vector<std::vector<i64>> coords(n);
  for (i64 h = 0; h < n; ++h) coords[h] = d.element(h);
  Cplx scale = e_of(Rational::make(-(d.sig_plus - d.sig_minus), 8)) / std::sqrt(Real(n));
  VVVector out(n);
  for (i64 h = 0; h < n; ++h) {
    Cplx acc(0, 0);
    for (i64 mu = 0; mu < n; ++mu)
      if (v[mu] != Cplx(0, 0)) acc += at.pairing(coords[h], coords[mu]) * v[mu];
    out[h] = scale * acc;
  }
  return out;
}

MetaplecticElement MetaplecticElement::identity() { return {}; }

MetaplecticElement MetaplecticElement::T(i64 n) {
  MetaplecticElement g;
  g.mat = Mat2{1, n, 0, 1};
  if (n != 0) g.word = {n};
  return g;
}

MetaplecticElement MetaplecticElement::S() {
  MetaplecticElement g;
  g.mat = m_S();
  g.word = {0};
  return g;
}

MetaplecticElement operator*(const MetaplecticElement& x, const MetaplecticElement& y) {
  MetaplecticElement g;
  g.mat = m_mul(x.mat, y.mat);
  g.word = x.word;
  g.word.insert(g.word.end(), y.word.begin(), y.word.end());
  return g;
}

Cplx MetaplecticElement::phase(Cplx tau) const {
  Cplx z = tau;
  Cplx phi(1, 0);
  for (size_t i = word.size(); i-- > 0;) {
    i64 letter = word[i];
    if (letter == 0) {
      phi *= std::sqrt(z);
      z = -Real(1) / z;
    } else {
      z += Real(letter);
    }
  }
  return phi;
}

Eigen::MatrixXcd rho_word(const DiscriminantForm& d, const MetaplecticElement& g) {
  i64 n = d.order();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(n, n);
  Eigen::VectorXcd t = rho_T(d);
  for (i64 letter : g.word) {
    if (letter == 0) {
      out = out * rho_S(d);
    } else {
      Eigen::VectorXcd tp(n);
      for (i64 h = 0; h < n; ++h)
        tp[h] = e_of((d.q_value(h) * Rational(letter)).frac());
      out = out * tp.asDiagonal();
    }
  }
  return out;
}

VVVector slash_action(const std::function<VVVector(Cplx)>& f, const Rational& k,
                      const MetaplecticElement& g, Cplx tau) {
  if (!(tau.imag() > 0)) throw std::domain_error("slash action needs an upper half-plane point");
  Rational two_k = k * Rational(2);
  if (!two_k.is_integer()) throw std::domain_error("weight must be half-integral");
  VVVector val = f(moebius(g.mat, tau));
  Cplx factor = ipow(g.phase(tau), -two_k.num);
  return factor * val;
}

Eigen::MatrixXcd twist_map(const DiscriminantForm& small_form,
                           const DiscriminantForm& big_form, i64 delta, i64 r) {
  if (small_form.mods.size() != 1 || small_form.mods[0] % 2 != 0)
    throw std::domain_error("twist source must be the cyclic level module");
  i64 N = small_form.mods[0] / 2;
  GenusCharContext ctx = make_genus_context(delta, r, N);  // validates delta, r
  i64 D = -delta;
  if (big_form.mods != std::vector<i64>{D, 2 * N * D, D})
    throw std::domain_error("twist target does not match the rescaled module");

  i64 big = big_form.order();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(big, 2 * N);
  for (i64 idx = 0; idx < big; ++idx) {
    std::vector<i64> x = big_form.element(idx);  // (a, b, c) for [N a, b, c]
    QuadForm rep{N * x[0], x[1], x[2], N};
    Rational qd = big_form.q_value(idx);
    for (i64 h = 0; h < 2 * N; ++h) {
      if (mod_pos(x[1] - r * h, 2 * N) != 0) continue;
      if (qd != small_form.q_value(h)) continue;
      int chi = genus_character(ctx, rep);
      if (chi != 0) out(idx, h) += Real(chi);
    }
  }
  return out;
}

Cplx CoeffFn::eval(Real v) const {
  Cplx out = constant;
  for (const auto& t : erfcs) out += t.s * Real(0.5) * std::erfc(t.a * std::sqrt(v));
  for (const auto& t : gauss) out += t.g * v * std::sqrt(v) * std::exp(-t.b * v);
  return out;
}

CoeffFn& CoeffFn::operator+=(const CoeffFn& other) {
  constant += other.constant;
  erfcs.insert(erfcs.end(), other.erfcs.begin(), other.erfcs.end());
  gauss.insert(gauss.end(), other.gauss.begin(), other.gauss.end());
  return *this;
}

void VVSeries::add(i64 h, i64 d, const CoeffFn& c) {
  comps[mod_pos(h, 2 * n)][d] += c;
}

ScalarSeries scalarize(const VVSeries& s) {
  // the rescale m -> 4N m is encoded in the integer keys, so integrality is
  // guaranteed by construction rather than checked at runtime
  if (i64(s.comps.size()) != 2 * s.n)
    throw std::runtime_error("series component count does not match the module");
  ScalarSeries out;
  for (const auto& comp : s.comps)
    for (const auto& [d, c] : comp) out.terms[d] += c;
  return out;
}

std::string dform_to_json(const DiscriminantForm& d) {
  nlohmann::json j;
  j["order"] = d.order();
  j["generators"] = d.mods;
  std::vector<std::string> qv;
  for (i64 h = 0; h < d.order(); ++h) qv.push_back(d.q_value(h).str());
  j["q_values"] = qv;
  j["signature"] = {d.sig_plus, d.sig_minus};
  return j.dump();
}

}  // namespace wind
