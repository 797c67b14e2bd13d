// Copyright 2026 The cataccess developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cataccess/core.hpp"
#include "cataccess/errors.hpp"

namespace cataccess::hilb {

using Dim = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Singular values below this are treated as zero when computing ranks.
inline constexpr double kRankTol = 1e-10;

/// A morphism of finite-dimensional Hilbert spaces: a dense complex matrix
/// of shape target-dim x source-dim. Entries must be finite.
class FdMorphism {
 public:
  explicit FdMorphism(Matrix m) : m_(std::move(m)) {
    if (!m_.allFinite()) throw value_error("FdMorphism: entries must be finite");
  }

  static FdMorphism zero(Dim rows, Dim cols) { return FdMorphism(Matrix::Zero(rows, cols)); }
  static FdMorphism identity(Dim n) { return FdMorphism(Matrix::Identity(n, n)); }

  static FdMorphism from_rowmajor(Dim rows, Dim cols, const std::vector<Complex>& entries) {
    if (static_cast<std::size_t>(rows * cols) != entries.size())
      throw value_error("FdMorphism: entry count does not match shape");
    Matrix m(rows, cols);
    for (Dim r = 0; r < rows; ++r)
      for (Dim c = 0; c < cols; ++c) m(r, c) = entries[static_cast<std::size_t>(r * cols + c)];
    return FdMorphism(std::move(m));
  }

  Dim rows() const { return m_.rows(); }  // target dimension
  Dim cols() const { return m_.cols(); }  // source dimension
  const Matrix& matrix() const { return m_; }
  Complex at(Dim r, Dim c) const { return m_(r, c); }

  FdMorphism dagger() const { return FdMorphism(m_.adjoint()); }
  FdMorphism transpose() const { return FdMorphism(m_.transpose()); }
  FdMorphism conj() const { return FdMorphism(m_.conjugate()); }

  bool approx_eq(const FdMorphism& o, double tol = kDefaultTol) const;

  double norm() const { return m_.norm(); }

 private:
  Matrix m_;
};

inline FdMorphism compose(const FdMorphism& g, const FdMorphism& f) {
  if (f.rows() != g.cols()) throw type_error("compose: target of f differs from source of g");
  return FdMorphism(g.matrix() * f.matrix());
}

/// Kronecker product with lexicographic index convention: (i ⊗ j) ↦ i * dim_b + j.
inline FdMorphism tensor(const FdMorphism& a, const FdMorphism& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Dim i = 0; i < a.rows(); ++i)
    for (Dim j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a.at(i, j) * b.matrix();
  return FdMorphism(std::move(out));
}

inline double deviation(const FdMorphism& a, const FdMorphism& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw type_error("deviation: shape mismatch");
  if (a.matrix().size() == 0) return 0.0;
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

inline bool FdMorphism::approx_eq(const FdMorphism& o, double tol) const {
  return rows() == o.rows() && cols() == o.cols() && deviation(*this, o) <= tol;
}

inline Eigen::Index rank_of(const FdMorphism& f, double sv_tol = kRankTol) {
  if (f.rows() == 0 || f.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(f.matrix());
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > sv_tol) ++r;
  return r;
}

inline bool in_M(const FdMorphism& f) { return rank_of(f) == f.cols(); }  // injective
inline bool in_E(const FdMorphism& f) { return rank_of(f) == f.rows(); }  // surjective
inline bool is_iso(const FdMorphism& f) { return f.rows() == f.cols() && in_M(f); }

/// Compact structure on C^dim: the η-vector is the vectorised identity
/// under the lexicographic Kronecker convention, ε its flip-dagger.
inline CompactStructure<struct HilbCat> compact_structure(Dim dim);

// --- factorisation -------------------------------------------------------

struct Factorisation {
  FdMorphism e;  // surjective, source ↠ C^rank
  FdMorphism m;  // injective, C^rank ↣ target
  Dim mid;
};

/// Epi-mono factorisation through C^rank(f), by singular value
/// decomposition: m = U_r (an isometry), e = Σ_r V_r†.
inline Factorisation factor(const FdMorphism& f) {
  if (f.rows() == 0 || f.cols() == 0) {
    return Factorisation{FdMorphism::zero(0, f.cols()), FdMorphism::zero(f.rows(), 0), 0};
  }
  Eigen::JacobiSVD<Matrix> svd(f.matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  Dim r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > kRankTol) ++r;
  const Matrix u = svd.matrixU().leftCols(r);
  const Matrix sv = svd.singularValues().head(r).asDiagonal() * svd.matrixV().leftCols(r).adjoint();
  return Factorisation{FdMorphism(sv), FdMorphism(u), r};
}

/// The unique w with w∘e = e2∘u and m2∘w = v∘m, by linear solve against the
/// injective side. Throws if the triangles do not close within tol.
inline FdMorphism diagonal_fill(const FdMorphism& e, const FdMorphism& m, const FdMorphism& e2,
                                const FdMorphism& m2, const FdMorphism& u, const FdMorphism& v,
                                double tol = kDefaultTol) {
  const FdMorphism outer_top = compose(v, compose(m, e));
  const FdMorphism outer_bot = compose(m2, compose(e2, u));
  if (!outer_top.approx_eq(outer_bot, tol))
    throw value_error("diagonal_fill: outer square does not commute");
  // least squares against m2 (full column rank)
  Matrix w;
  if (m2.cols() == 0 || m2.rows() == 0) {
    w = Matrix::Zero(m2.cols(), m.cols());
  } else {
    w = m2.matrix().completeOrthogonalDecomposition().solve(compose(v, m).matrix());
  }
  FdMorphism fill{std::move(w)};
  if (!compose(fill, e).approx_eq(compose(e2, u), tol) ||
      !compose(m2, fill).approx_eq(compose(v, m), tol))
    throw error("diagonal_fill: no diagonal satisfies both triangles");
  return fill;
}

// --- chain colimits ------------------------------------------------------

struct ChainColimit {
  Dim object;
  std::vector<FdMorphism> cocone;
};

// Colimit of a finite chain of injective maps whose dimensions eventually
// stop growing: the top object, with the step composites as cocone. Without
// a declared stabilisation level the tail of square steps is detected;
// strictly growing chains are rejected.
inline ChainColimit chain_colimit(Dim first, const std::vector<FdMorphism>& steps,
                                  std::optional<std::size_t> declared_stable = std::nullopt,
                                  double /*tol*/ = kDefaultTol) {
  std::vector<Dim> dims{first};
  for (std::size_t n = 0; n < steps.size(); ++n) {
    if (steps[n].cols() != dims.back())
      throw type_error("chain_colimit: step " + std::to_string(n) + " does not chain");
    if (!in_M(steps[n]))
      throw value_error("chain_colimit: step " + std::to_string(n) + " is not injective");
    dims.push_back(steps[n].rows());
  }
  const std::size_t k = steps.size();
  std::size_t stable = k;
  while (stable > 0 && steps[stable - 1].rows() == steps[stable - 1].cols()) --stable;
  if (declared_stable) {
    if (*declared_stable > k)
      throw colimit_error("chain_colimit: declared stabilisation level beyond truncation");
    if (stable > *declared_stable)
      throw value_error("chain_colimit: declared stabilisation level has growing steps after it");
  } else if (k > 0 && stable == k) {
    throw colimit_error("chain_colimit: chain not stabilised within provided length");
  }

  std::vector<FdMorphism> cocone;
  cocone.reserve(k + 1);
  FdMorphism acc = FdMorphism::identity(dims[k]);
  std::vector<FdMorphism> rev;
  rev.push_back(acc);
  for (std::size_t n = k; n-- > 0;) {
    acc = compose(acc, steps[n]);
    rev.push_back(acc);
  }
  for (std::size_t n = 0; n <= k; ++n) cocone.push_back(rev[k - n]);
  return ChainColimit{dims[k], std::move(cocone)};
}

// --- classical structures ------------------------------------------------

/// Commutative comonoid (δ, ε) on C^dim with δ an isometry satisfying the
/// Frobenius condition; models copyable classical data.
struct ClassicalStructure {
  Dim dim;
  FdMorphism delta;    // dim → dim², copying
  FdMorphism epsilon;  // dim → 1, deleting
};

/// The standard-basis copy structure: δ|i⟩ = |ii⟩, ε|i⟩ = 1.
inline ClassicalStructure classical_structure(Dim dim) {
  if (dim < 1) throw value_error("classical_structure: dimension must be at least 1");
  Matrix d = Matrix::Zero(dim * dim, dim);
  for (Dim i = 0; i < dim; ++i) d(i * dim + i, i) = 1.0;
  Matrix e = Matrix::Ones(1, dim);
  return ClassicalStructure{dim, FdMorphism(std::move(d)), FdMorphism(std::move(e))};
}

/// Copy structure for the orthonormal basis u|i⟩: conjugation of the
/// standard one by the unitary u.
inline ClassicalStructure conjugated_classical(const ClassicalStructure& cs, const FdMorphism& u,
                                               double tol = kDefaultTol) {
  if (u.rows() != cs.dim || u.cols() != cs.dim) throw type_error("conjugated_classical: shape");
  if (!compose(u.dagger(), u).approx_eq(FdMorphism::identity(cs.dim), tol) ||
      !compose(u, u.dagger()).approx_eq(FdMorphism::identity(cs.dim), tol))
    throw value_error("conjugated_classical: conjugating map is not unitary");
  const FdMorphism delta = compose(tensor(u, u), compose(cs.delta, u.dagger()));
  const FdMorphism eps = compose(cs.epsilon, u.dagger());
  return ClassicalStructure{cs.dim, delta, eps};
}

struct ClassicalReport {
  bool pass = false;
  double coassociativity = 0.0;
  double cocommutativity = 0.0;
  double counit = 0.0;
  double isometry = 0.0;
  double frobenius = 0.0;
  double max_deviation = 0.0;
};

CompactStructure<struct HilbCat> induced_compact(const ClassicalStructure& cs);

/// p ∘ p† = id on the classical codomain: the defining condition of a
/// demolition projector-valued spectrum.
inline CheckReport check_pvm(const FdMorphism& p, double tol = kDefaultTol) {
  const double d = deviation(compose(p, p.dagger()), FdMorphism::identity(p.rows()));
  return CheckReport{d <= tol, d};
}

/// A demolition measurement: p : X → C onto a classical structure C.
struct PVSpectrum {
  FdMorphism p;
  ClassicalStructure classical;
};

inline PVSpectrum pv_spectrum(FdMorphism p, ClassicalStructure c, double tol = kDefaultTol) {
  if (p.rows() != c.dim) throw type_error("pv_spectrum: codomain differs from classical carrier");
  if (!check_pvm(p, tol).pass) throw value_error("pv_spectrum: p ∘ p† is not the identity");
  return PVSpectrum{std::move(p), std::move(c)};
}

// --- category trait ------------------------------------------------------

/// FdHilb plugged into the generic categorical interface. Objects are
/// dimensions; associators and unitors are identities under the
/// lexicographic Kronecker convention, the symmetry is a genuine permutation.
struct HilbCat {
  using Object = Dim;
  using Morphism = FdMorphism;
  static constexpr const char* name = "fdhilb";
  static constexpr bool exact = false;

  static Object unit() { return 1; }
  static Object tensor_obj(Object a, Object b) { return a * b; }
  static Object dual_obj(Object a) { return a; }
  static Object source(const Morphism& f) { return f.cols(); }
  static Object target(const Morphism& f) { return f.rows(); }

  static Morphism id(Object a) { return FdMorphism::identity(a); }
  static Morphism compose(const Morphism& g, const Morphism& f) { return hilb::compose(g, f); }
  static Morphism tensor(const Morphism& f, const Morphism& g) { return hilb::tensor(f, g); }
  static Morphism dagger(const Morphism& f) { return f.dagger(); }
  static Morphism conj(const Morphism& f) { return f.conj(); }

  static Morphism associator(Object a, Object b, Object c) {
    return FdMorphism::identity(a * b * c);
  }
  static Morphism associator_inv(Object a, Object b, Object c) {
    return FdMorphism::identity(a * b * c);
  }
  static Morphism left_unitor(Object a) { return FdMorphism::identity(a); }
  static Morphism left_unitor_inv(Object a) { return FdMorphism::identity(a); }
  static Morphism right_unitor(Object a) { return FdMorphism::identity(a); }
  static Morphism right_unitor_inv(Object a) { return FdMorphism::identity(a); }

  static Morphism symmetry(Object a, Object b) {
    Matrix p = Matrix::Zero(a * b, a * b);
    for (Dim i = 0; i < a; ++i)
      for (Dim j = 0; j < b; ++j) p(j * a + i, i * b + j) = 1.0;
    return FdMorphism(std::move(p));
  }

  static bool equal(const Morphism& f, const Morphism& g, double tol = kDefaultTol) {
    return f.approx_eq(g, tol);
  }
  static double deviation(const Morphism& f, const Morphism& g) { return hilb::deviation(f, g); }

  static CompactStructure<HilbCat> compact(Object x);

  static bool in_E(const Morphism& f) { return hilb::in_E(f); }
  static bool in_M(const Morphism& f) { return hilb::in_M(f); }
  static bool is_iso(const Morphism& f, double /*tol*/ = 0.0) { return hilb::is_iso(f); }

  static GenericFactorisation<HilbCat> factor(const Morphism& f) {
    auto fac = hilb::factor(f);
    return GenericFactorisation<HilbCat>{fac.e, fac.m, fac.mid};
  }

  static Colimit<HilbCat> chain_colimit(Object first, const std::vector<Morphism>& steps,
                                        std::optional<std::size_t> declared_stable, double tol) {
    auto c = hilb::chain_colimit(first, steps, declared_stable, tol);
    return Colimit<HilbCat>{c.object, c.cocone};
  }

  /// Unique u with cone[n] ∘ u = legs[n], by stacked least squares.
  static Morphism mediate_limit(const std::vector<Morphism>& cone,
                                const std::vector<Morphism>& legs, double tol = kDefaultTol) {
    if (cone.empty() || cone.size() != legs.size())
      throw value_error("mediate_limit: level count mismatch");
    Dim total = 0;
    for (const auto& c : cone) total += c.rows();
    const Dim l = cone[0].cols(), v = legs[0].cols();
    Matrix a(total, l), b(total, v);
    Dim row = 0;
    for (std::size_t n = 0; n < cone.size(); ++n) {
      if (legs[n].cols() != v || cone[n].cols() != l || legs[n].rows() != cone[n].rows())
        throw type_error("mediate_limit: leg shapes do not match the cone");
      a.middleRows(row, cone[n].rows()) = cone[n].matrix();
      b.middleRows(row, legs[n].rows()) = legs[n].matrix();
      row += cone[n].rows();
    }
    Matrix u = (l == 0 || total == 0)
                   ? Matrix::Zero(l, v)
                   : a.completeOrthogonalDecomposition().solve(b).eval();
    const double res = (total == 0 || v == 0) ? 0.0 : (a * u - b).cwiseAbs().maxCoeff();
    if (res > tol) throw mediate_error("mediate_limit: legs are not a compatible cone");
    return FdMorphism(std::move(u));
  }

  /// Unique h with h ∘ cocone[n] = legs[n].
  static Morphism mediate_colimit(const std::vector<Morphism>& cocone,
                                  const std::vector<Morphism>& legs, double tol = kDefaultTol) {
    std::vector<Morphism> cone_t, legs_t;
    cone_t.reserve(cocone.size());
    legs_t.reserve(legs.size());
    for (const auto& c : cocone) cone_t.push_back(c.transpose());
    for (const auto& g : legs) legs_t.push_back(g.transpose());
    return mediate_limit(cone_t, legs_t, tol).transpose();
  }
};

inline CompactStructure<HilbCat> compact_structure(Dim dim) {
  if (dim < 0) throw value_error("compact_structure: negative dimension");
  Matrix eta = Matrix::Zero(dim * dim, 1);
  for (Dim i = 0; i < dim; ++i) eta(i * dim + i, 0) = 1.0;
  // ε = η† ∘ σ, which for the vectorised identity is again the flat pairing
  const FdMorphism eps =
      compose(FdMorphism(eta.adjoint().eval()), HilbCat::symmetry(dim, dim));
  return CompactStructure<HilbCat>{dim, dim, FdMorphism(std::move(eta)), eps};
}

inline CompactStructure<HilbCat> HilbCat::compact(Object x) { return compact_structure(x); }

/// η = δ ∘ ε†, ε = ε ∘ δ†: the compact structure a classical structure
/// induces on its own carrier.
inline CompactStructure<HilbCat> induced_compact(const ClassicalStructure& cs) {
  return CompactStructure<HilbCat>{cs.dim, cs.dim, compose(cs.delta, cs.epsilon.dagger()),
                                   compose(cs.epsilon, cs.delta.dagger())};
}

/// Verifies all comonoid and Frobenius laws, reporting the deviation per law.
inline ClassicalReport check_classical(const ClassicalStructure& cs, double tol = kDefaultTol) {
  const Dim d = cs.dim;
  const FdMorphism idd = FdMorphism::identity(d);
  ClassicalReport r;
  // (δ ⊗ id) ∘ δ = (id ⊗ δ) ∘ δ  (associators are identities here)
  r.coassociativity =
      deviation(compose(tensor(cs.delta, idd), cs.delta), compose(tensor(idd, cs.delta), cs.delta));
  // σ ∘ δ = δ
  r.cocommutativity = deviation(compose(HilbCat::symmetry(d, d), cs.delta), cs.delta);
  // (ε ⊗ id) ∘ δ = id = (id ⊗ ε) ∘ δ
  r.counit = std::max(deviation(compose(tensor(cs.epsilon, idd), cs.delta), idd),
                      deviation(compose(tensor(idd, cs.epsilon), cs.delta), idd));
  // δ† ∘ δ = id
  r.isometry = deviation(compose(cs.delta.dagger(), cs.delta), idd);
  // δ ∘ δ† = (δ† ⊗ id) ∘ (id ⊗ δ)
  r.frobenius = deviation(compose(cs.delta, cs.delta.dagger()),
                          compose(tensor(cs.delta.dagger(), idd), tensor(idd, cs.delta)));
  r.max_deviation = std::max({r.coassociativity, r.cocommutativity, r.counit, r.isometry,
                              r.frobenius});
  r.pass = r.max_deviation <= tol;
  return r;
}

}  // namespace cataccess::hilb
