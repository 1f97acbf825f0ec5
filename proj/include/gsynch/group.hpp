#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"

namespace gsynch {

/// Finite group stored as a multiplication table over element indices 0..L-1.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  /// Validates the table: Latin square, two-sided identity, inverses, and
  /// (for order <= 64) associativity over all triples.
  static FiniteGroup from_table(int order, std::vector<int> mul, std::vector<std::string> labels = {}) {
    require(order >= 1, "group order must be positive");
    require(mul.size() == static_cast<std::size_t>(order) * order, "multiplication table must have order^2 entries");
    FiniteGroup g;
    g.order_ = order;
    g.mul_ = std::move(mul);
    for (int v : g.mul_) require(v >= 0 && v < order, "multiplication table entry out of range");
    for (int a = 0; a < order; ++a) {
      std::vector<char> row(order, 0), col(order, 0);
      for (int b = 0; b < order; ++b) {
        row[g(a, b)] = 1;
        col[g(b, a)] = 1;
      }
      require(std::all_of(row.begin(), row.end(), [](char c) { return c; }) &&
                  std::all_of(col.begin(), col.end(), [](char c) { return c; }),
              "multiplication table is not a Latin square");
    }
    g.identity_ = -1;
    for (int e = 0; e < order && g.identity_ < 0; ++e) {
      bool ok = true;
      for (int x = 0; x < order && ok; ++x) ok = g(e, x) == x && g(x, e) == x;
      if (ok) g.identity_ = e;
    }
    require(g.identity_ >= 0, "multiplication table has no identity");
    if (order <= 64) {
      for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b)
          for (int c = 0; c < order; ++c)
            require(g(g(a, b), c) == g(a, g(b, c)), "multiplication table is not associative");
    }
    g.inverse_.assign(order, -1);
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        if (g(a, b) == g.identity_ && g(b, a) == g.identity_) g.inverse_[a] = b;
    for (int v : g.inverse_) require(v >= 0, "element without two-sided inverse");
    if (labels.empty()) {
      for (int a = 0; a < order; ++a) labels.push_back(std::to_string(a));
    }
    require(labels.size() == static_cast<std::size_t>(order), "label count must equal group order");
    g.labels_ = std::move(labels);
    return g;
  }

  int order() const noexcept { return order_; }
  int identity() const noexcept { return identity_; }
  int operator()(int a, int b) const { return mul_[static_cast<std::size_t>(a) * order_ + b]; }
  int inverse(int a) const { return inverse_[a]; }
  const std::vector<int>& table() const noexcept { return mul_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  int order_ = 0;
  std::vector<int> mul_;
  int identity_ = 0;
  std::vector<int> inverse_;
  std::vector<std::string> labels_;
};

enum class RepType { real, complex, quaternionic };

inline std::string to_string(RepType t) {
  switch (t) {
    case RepType::real: return "real";
    case RepType::complex: return "complex";
    case RepType::quaternionic: return "quaternionic";
  }
  return "?";
}

inline RepType rep_type_from_string(const std::string& s) {
  if (s == "real") return RepType::real;
  if (s == "complex") return RepType::complex;
  if (s == "quaternionic") return RepType::quaternionic;
  fail(ErrorKind::invalid_parameter, "unknown representation type '" + s + "'");
}

inline constexpr double kStructureTol = 1e-10;

/// Frobenius-Schur indicator (1/L) sum_g chi(g^2) of a representation given
/// by its matrices, rounded to {-1, 0, +1}.
struct IndicatorValue {
  int rounded;
  double raw;
};

inline IndicatorValue frobenius_schur(const FiniteGroup& group, const std::vector<CMatrix>& matrices) {
  cplx acc = 0.0;
  for (int g = 0; g < group.order(); ++g) acc += matrices[group(g, g)].trace();
  acc /= static_cast<double>(group.order());
  const double raw = acc.real();
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-4 || std::abs(acc.imag()) > 1e-4 || std::abs(rounded) > 1.0)
    fail(ErrorKind::numerical_inconsistency,
         "Frobenius-Schur indicator " + std::to_string(raw) + " is not close to -1, 0 or 1");
  return {static_cast<int>(rounded), raw};
}

inline RepType rep_type_from_indicator(int indicator) {
  if (indicator > 0) return RepType::real;
  if (indicator < 0) return RepType::quaternionic;
  return RepType::complex;
}

/// Unitary irreducible representation. `complex_dim` is the size of the
/// stored matrices; for quaternionic type `dim()` is half of it.
class Irrep {
 public:
  Irrep() = default;

  /// Checks homomorphism, unitarity, quaternionic block layout and that the
  /// declared type matches the Frobenius-Schur indicator.
  static Irrep make(const FiniteGroup& group, std::vector<CMatrix> matrices, RepType type, std::string label = {}) {
    require(matrices.size() == static_cast<std::size_t>(group.order()), "one matrix per group element required");
    const auto d = matrices.front().rows();
    require(d >= 1, "representation dimension must be positive");
    for (const auto& m : matrices) require(m.rows() == d && m.cols() == d, "representation matrices must be square and equal-sized");
    if (type == RepType::quaternionic) require(d % 2 == 0, "quaternionic representation needs even complex dimension");

    Irrep r;
    r.matrices_ = std::move(matrices);
    r.type_ = type;
    r.label_ = std::move(label);
    r.complex_dim_ = static_cast<int>(d);

    for (int g = 0; g < group.order(); ++g) {
      if (unitarity_defect(r.matrices_[g]) > kStructureTol)
        fail(ErrorKind::invalid_parameter, "representation matrix of element " + std::to_string(g) + " is not unitary");
      for (int h = 0; h < group.order(); ++h) {
        const double dev = (r.matrices_[g] * r.matrices_[h] - r.matrices_[group(g, h)]).cwiseAbs().maxCoeff();
        if (dev > kStructureTol)
          fail(ErrorKind::invalid_parameter, "representation is not a homomorphism at (" + std::to_string(g) + "," +
                                                 std::to_string(h) + ")");
      }
    }
    if (type == RepType::quaternionic) {
      for (const auto& m : r.matrices_)
        for (Eigen::Index i = 0; i < d; i += 2)
          for (Eigen::Index j = 0; j < d; j += 2) {
            const bool ok = std::abs(m(i + 1, j + 1) - std::conj(m(i, j))) <= kStructureTol &&
                            std::abs(m(i + 1, j) + std::conj(m(i, j + 1))) <= kStructureTol;
            if (!ok) fail(ErrorKind::invalid_parameter, "quaternionic representation violates 2x2 block structure");
          }
    }
    const auto fs = frobenius_schur(group, r.matrices_);
    if (rep_type_from_indicator(fs.rounded) != type)
      fail(ErrorKind::invalid_parameter, "declared type " + to_string(type) + " disagrees with Frobenius-Schur indicator " +
                                             std::to_string(fs.rounded));
    r.is_trivial_ = d == 1;
    for (const auto& m : r.matrices_) r.is_trivial_ = r.is_trivial_ && std::abs(m(0, 0) - 1.0) <= kStructureTol;
    return r;
  }

  int complex_dim() const noexcept { return complex_dim_; }
  /// Dimension over the representation's own field (quaternionic: over H).
  int dim() const noexcept { return type_ == RepType::quaternionic ? complex_dim_ / 2 : complex_dim_; }
  RepType type() const noexcept { return type_; }
  bool is_trivial() const noexcept { return is_trivial_; }
  const std::string& label() const noexcept { return label_; }
  const CMatrix& operator()(int g) const { return matrices_[g]; }
  const std::vector<CMatrix>& matrices() const noexcept { return matrices_; }

  cplx character(int g) const { return matrices_[g].trace(); }

  /// LDLR weight beta * d / 2 (beta = 1 real, 2 complex/quaternionic).
  double overlap_weight() const {
    switch (type_) {
      case RepType::real: return 0.5 * complex_dim_;
      case RepType::complex: return complex_dim_;
      case RepType::quaternionic: return 0.5 * complex_dim_;
    }
    return 0.0;
  }

 private:
  std::vector<CMatrix> matrices_;
  RepType type_ = RepType::real;
  std::string label_;
  int complex_dim_ = 1;
  bool is_trivial_ = false;
};

enum class IrrepConvention { full, nonredundant };

struct IrrepList {
  std::vector<Irrep> entries;
  IrrepConvention convention = IrrepConvention::full;

  std::size_t size() const noexcept { return entries.size(); }
  const Irrep& operator[](std::size_t i) const { return entries[i]; }
  auto begin() const { return entries.begin(); }
  auto end() const { return entries.end(); }
};

inline bool conjugate_characters(const FiniteGroup& group, const Irrep& a, const Irrep& b) {
  if (a.complex_dim() != b.complex_dim()) return false;
  for (int g = 0; g < group.order(); ++g)
    if (std::abs(a.character(g) - std::conj(b.character(g))) > 1e-8) return false;
  return true;
}

/// Wraps a complete irrep list, checking the Peter-Weyl count sum d^2 = L.
inline IrrepList make_full_list(const FiniteGroup& group, std::vector<Irrep> irreps) {
  long total = 0;
  for (const auto& r : irreps) total += static_cast<long>(r.complex_dim()) * r.complex_dim();
  if (total != group.order())
    fail(ErrorKind::invalid_parameter, "irrep dimensions give sum d^2 = " + std::to_string(total) + ", expected " +
                                           std::to_string(group.order()));
  return {std::move(irreps), IrrepConvention::full};
}

/// Drops the trivial irrep and keeps one member per conjugate pair: the one
/// whose first non-real character value (in element order) has positive
/// imaginary part; ties fall back to list order.
inline IrrepList nonredundant(const FiniteGroup& group, const IrrepList& list) {
  if (list.convention == IrrepConvention::nonredundant) return list;
  IrrepList out;
  out.convention = IrrepConvention::nonredundant;
  std::vector<char> used(list.size(), 0);
  auto leading_imag = [&](const Irrep& r) {
    for (int g = 0; g < group.order(); ++g) {
      const double im = r.character(g).imag();
      if (std::abs(im) > 1e-9) return im;
    }
    return 0.0;
  };
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (used[i] || list[i].is_trivial()) continue;
    used[i] = 1;
    if (list[i].type() != RepType::complex) {
      out.entries.push_back(list[i]);
      continue;
    }
    std::size_t keep = i;
    for (std::size_t j = i + 1; j < list.size(); ++j) {
      if (!used[j] && conjugate_characters(group, list[i], list[j])) {
        used[j] = 1;
        if (!(leading_imag(list[i]) > 0.0) && leading_imag(list[j]) > 0.0) keep = j;
        break;
      }
    }
    out.entries.push_back(list[keep]);
  }
  return out;
}

struct GroupWithIrreps {
  FiniteGroup group;
  IrrepList full;
  std::string name;

  IrrepList nonredundant() const { return gsynch::nonredundant(group, full); }
};

/// Z_L with irreps g -> exp(2 pi i k g / L), k = 0..L-1.
inline GroupWithIrreps build_cyclic(int order) {
  if (order < 2) fail(ErrorKind::invalid_parameter, "cyclic group needs L >= 2");
  std::vector<int> mul(static_cast<std::size_t>(order) * order);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) mul[static_cast<std::size_t>(a) * order + b] = (a + b) % order;
  GroupWithIrreps out;
  out.group = FiniteGroup::from_table(order, std::move(mul));
  out.name = "cyclic(" + std::to_string(order) + ")";
  std::vector<Irrep> irreps;
  for (int k = 0; k < order; ++k) {
    std::vector<CMatrix> mats;
    for (int g = 0; g < order; ++g) mats.push_back(CMatrix::Constant(1, 1, root_of_unity(order, static_cast<std::int64_t>(k) * g)));
    const RepType type = (2 * k) % order == 0 ? RepType::real : RepType::complex;
    irreps.push_back(Irrep::make(out.group, std::move(mats), type, "k=" + std::to_string(k)));
  }
  out.full = make_full_list(out.group, std::move(irreps));
  return out;
}

/// Dihedral group D_m of order 2m; element r^a s^b has index a + m*b.
/// Irreps are given in real orthogonal form.
inline GroupWithIrreps build_dihedral(int m) {
  if (m < 3) fail(ErrorKind::invalid_parameter, "dihedral group needs m >= 3");
  const int order = 2 * m;
  auto index = [m](int a, int b) { return ((a % m) + m) % m + m * b; };
  std::vector<int> mul(static_cast<std::size_t>(order) * order);
  std::vector<std::string> labels(order);
  for (int x = 0; x < order; ++x) {
    const int a = x % m, b = x / m;
    labels[x] = (b ? "r^" + std::to_string(a) + "s" : "r^" + std::to_string(a));
    for (int y = 0; y < order; ++y) {
      const int c = y % m, e = y / m;
      mul[static_cast<std::size_t>(x) * order + y] = index(b ? a - c : a + c, (b + e) % 2);
    }
  }
  GroupWithIrreps out;
  out.group = FiniteGroup::from_table(order, std::move(mul), std::move(labels));
  out.name = "dihedral(" + std::to_string(m) + ")";

  auto one_dim = [&](int rot_sign, int refl_sign, const std::string& label) {
    std::vector<CMatrix> mats;
    for (int x = 0; x < order; ++x) {
      const int a = x % m, b = x / m;
      const double v = (a % 2 == 1 && rot_sign < 0 ? -1.0 : 1.0) * (b == 1 && refl_sign < 0 ? -1.0 : 1.0);
      mats.push_back(CMatrix::Constant(1, 1, v));
    }
    return Irrep::make(out.group, std::move(mats), RepType::real, label);
  };
  std::vector<Irrep> irreps;
  irreps.push_back(one_dim(1, 1, "trivial"));
  irreps.push_back(one_dim(1, -1, "sign"));
  if (m % 2 == 0) {
    irreps.push_back(one_dim(-1, 1, "alt+"));
    irreps.push_back(one_dim(-1, -1, "alt-"));
  }
  for (int h = 1; 2 * h < m; ++h) {
    std::vector<CMatrix> mats;
    for (int x = 0; x < order; ++x) {
      const int a = x % m, b = x / m;
      const cplx z = root_of_unity(m, static_cast<std::int64_t>(h) * a);
      CMatrix rot(2, 2);
      rot << z.real(), -z.imag(), z.imag(), z.real();
      CMatrix refl = CMatrix::Identity(2, 2);
      if (b == 1) refl(1, 1) = -1.0;
      mats.push_back(rot * refl);
    }
    irreps.push_back(Irrep::make(out.group, std::move(mats), RepType::real, "rot" + std::to_string(h)));
  }
  out.full = make_full_list(out.group, std::move(irreps));
  return out;
}

/// Quaternion group Q8 = {+-1, +-i, +-j, +-k}, indexed 1,-1,i,-i,j,-j,k,-k.
inline GroupWithIrreps build_quaternion8() {
  // element = sign * unit, unit in {1,i,j,k} = 0..3
  auto unit_of = [](int x) { return x / 2; };
  auto sign_of = [](int x) { return x % 2 == 0 ? 1 : -1; };
  // unit products: table[u][v] = (sign, unit)
  const int prod_unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int prod_sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  std::vector<int> mul(64);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      const int u = unit_of(x), v = unit_of(y);
      const int s = sign_of(x) * sign_of(y) * prod_sign[u][v];
      mul[x * 8 + y] = 2 * prod_unit[u][v] + (s > 0 ? 0 : 1);
    }
  GroupWithIrreps out;
  out.group = FiniteGroup::from_table(8, std::move(mul), {"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
  out.name = "quaternion8";

  std::vector<Irrep> irreps;
  // one-dimensional: unit u -> +-1 depending on kernel
  const char* names[4] = {"trivial", "ker<i>", "ker<j>", "ker<k>"};
  for (int kernel = 0; kernel < 4; ++kernel) {
    std::vector<CMatrix> mats;
    for (int x = 0; x < 8; ++x) {
      const int u = unit_of(x);
      const double v = (kernel == 0 || u == 0 || u == kernel) ? 1.0 : -1.0;
      mats.push_back(CMatrix::Constant(1, 1, v));
    }
    irreps.push_back(Irrep::make(out.group, std::move(mats), RepType::real, names[kernel]));
  }
  // a + bi + cj + dk -> [[a+bi, c+di], [-c+di, a-bi]]
  std::vector<CMatrix> mats;
  for (int x = 0; x < 8; ++x) {
    double q[4] = {0, 0, 0, 0};
    q[unit_of(x)] = sign_of(x);
    CMatrix m(2, 2);
    m << cplx(q[0], q[1]), cplx(q[2], q[3]), cplx(-q[2], q[3]), cplx(q[0], -q[1]);
    mats.push_back(m);
  }
  irreps.push_back(Irrep::make(out.group, std::move(mats), RepType::quaternionic, "quaternion"));
  out.full = make_full_list(out.group, std::move(irreps));
  return out;
}

/// Catalog lookup: "cyclic(L)", "dihedral(m)", "quaternion8" (alias "q8").
inline GroupWithIrreps build_catalog(const std::string& name) {
  auto arg = [&](const std::string& prefix) -> std::optional<int> {
    if (name.rfind(prefix + "(", 0) != 0 || name.back() != ')') return std::nullopt;
    const std::string inner = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
    try {
      std::size_t used = 0;
      const int v = std::stoi(inner, &used);
      if (used != inner.size()) return std::nullopt;
      return v;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  if (name == "quaternion8" || name == "q8" || name == "Q8") return build_quaternion8();
  if (auto m = arg("dihedral")) return build_dihedral(*m);
  if (auto l = arg("cyclic")) return build_cyclic(*l);
  fail(ErrorKind::invalid_parameter, "unknown catalog group '" + name + "'");
}

/// Left regular representation: [rho_reg(h)]_{t,s} = 1 if t s^{-1} = h.
inline CMatrix regular_rep(const FiniteGroup& group, int h) {
  const int order = group.order();
  CMatrix m = CMatrix::Zero(order, order);
  for (int s = 0; s < order; ++s) m(group(h, s), s) = 1.0;
  return m;
}

/// Unitary U whose rows are sqrt(d/L) rho(g)_{ij}, ordered by irrep, then
/// column index j (the copy), then row index i. With that ordering
/// U rho_reg(g) U* = diag over irreps of d copies of rho(g).
inline CMatrix regular_rep_unitary(const FiniteGroup& group, const IrrepList& full) {
  require(full.convention == IrrepConvention::full, "regular_rep_unitary needs the full irrep list");
  const int order = group.order();
  long total = 0;
  for (const auto& r : full) total += static_cast<long>(r.complex_dim()) * r.complex_dim();
  require(total == order, "irrep list fails the dimension count sum d^2 = L");
  CMatrix u(order, order);
  Eigen::Index row = 0;
  for (const auto& r : full) {
    const int d = r.complex_dim();
    const double scale = std::sqrt(static_cast<double>(d) / order);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i, ++row)
        for (int g = 0; g < order; ++g) u(row, g) = scale * r(g)(i, j);
  }
  if (unitarity_defect(u) > kStructureTol)
    fail(ErrorKind::numerical_inconsistency, "regular representation change of basis is not unitary");
  return u;
}

/// Block sizes along the diagonal of U rho_reg(g) U*, in row order.
inline std::vector<int> regular_block_dims(const IrrepList& full) {
  std::vector<int> dims;
  for (const auto& r : full)
    for (int c = 0; c < r.complex_dim(); ++c) dims.push_back(r.complex_dim());
  return dims;
}

/// Max |<f, h> - delta| over all pairs of scaled matrix coefficients
/// sqrt(d) rho_ij in L^2(G) with the normalised counting measure.
inline double peter_weyl_orthogonality_check(const FiniteGroup& group, const IrrepList& irreps) {
  struct Coef {
    const Irrep* rep;
    int i, j;
  };
  std::vector<Coef> coefs;
  for (const auto& r : irreps)
    for (int i = 0; i < r.complex_dim(); ++i)
      for (int j = 0; j < r.complex_dim(); ++j) coefs.push_back({&r, i, j});
  double worst = 0.0;
  const double inv_order = 1.0 / group.order();
  for (std::size_t a = 0; a < coefs.size(); ++a)
    for (std::size_t b = a; b < coefs.size(); ++b) {
      cplx ip = 0.0;
      const double scale = std::sqrt(static_cast<double>(coefs[a].rep->complex_dim()) * coefs[b].rep->complex_dim());
      for (int g = 0; g < group.order(); ++g)
        ip += (*coefs[a].rep)(g)(coefs[a].i, coefs[a].j) * std::conj((*coefs[b].rep)(g)(coefs[b].i, coefs[b].j));
      ip *= scale * inv_order;
      worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace gsynch
