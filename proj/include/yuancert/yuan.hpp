#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>

#include "yuancert/cone.hpp"
#include "yuancert/matrix.hpp"
#include "yuancert/numeric_core.hpp"

namespace yuancert {

/// Relative threshold for certificates and refutations: a combination certifies when its
/// restricted smallest eigenvalue is >= -kCertTol * scale, and a witness refutes when every
/// form value is < -kCertTol * scale.
inline constexpr double kCertTol = 1e-9;

/// A point of the probability simplex: t_i >= 0, |sum t_i - 1| <= 1e-12.
class SimplexWeights {
public:
    /// Throws InputError unless `t` already lies on the simplex.
    explicit SimplexWeights(Vector t);
    /// Clamps entries in [-1e-9, 0) to zero and rescales to unit sum. Throws on larger negatives.
    static SimplexWeights normalized(Vector t);
    static SimplexWeights uniform(std::size_t m);
    static SimplexWeights unit(std::size_t m, std::size_t i);

    std::size_t size() const noexcept { return t_.size(); }
    double operator[](std::size_t i) const { return t_[i]; }
    const Vector& values() const noexcept { return t_; }

private:
    Vector t_;
};

struct Certified {
    SimplexWeights weights;
    double lambda_min;  // smallest eigenvalue of sum t_i A_i restricted to span(K)
};

struct Refuted {
    Vector witness;      // unit vector in K
    Vector form_values;  // witness^T A_i witness, all strictly negative
};

struct HypothesisViolation {
    std::string reason;
};

struct CertificateReport {
    std::variant<Certified, Refuted, HypothesisViolation> outcome = HypothesisViolation{};
    std::map<std::string, double> residuals;

    const Certified* certified() const { return std::get_if<Certified>(&outcome); }
    const Refuted* refuted() const { return std::get_if<Refuted>(&outcome); }
    const HypothesisViolation* violation() const { return std::get_if<HypothesisViolation>(&outcome); }
};

/// 1 + max_i max|A_i|; the scale used by all relative thresholds.
double family_scale(std::span<const SymMatrix> family);

/// Smallest eigenvalue of sum t_i A_i restricted to `basis` (0 when the basis is empty).
double restricted_lambda_min(std::span<const SymMatrix> family, const SimplexWeights& t, const Matrix& basis);

/// lambda_min(t A + (1 - t) B), concave in t.
double lambda_min_profile(const SymMatrix& a, const SymMatrix& b, double t);

/// Two-matrix solver: maximizes the pencil's smallest eigenvalue on span(K) by golden-section
/// search. Either certifies with weights (t, 1 - t) or returns a verified witness in K on which
/// both forms are negative. Throws NumericalFailure when no verified witness is found.
CertificateReport yuan_two(const SymMatrix& a, const SymMatrix& b, const FirstOrderCone& k);

/// Certificate for families whose set rank is at most 2, following the case reduction on the
/// last non-basis member down to a two-matrix problem. Families of higher rank are reported
/// as HypothesisViolation.
CertificateReport certify_rank2(std::span<const SymMatrix> family, const FirstOrderCone& k,
                                double rank_tol = kDefaultRankTol);

/// Independent re-checks used by the pipelines and tests.
bool certificate_holds(std::span<const SymMatrix> family, const FirstOrderCone& k, const SimplexWeights& t);
bool refutation_holds(std::span<const SymMatrix> family, const FirstOrderCone& k, std::span<const double> witness);

}  // namespace yuancert
