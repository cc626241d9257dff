#pragma once

#include <string>
#include <variant>

namespace trawlkit {

/// Parametric trawl function a(.) with a(0) = 1.
///
/// Two families are supported:
///   - exponential: a(s) = exp(-lambda s)
///   - supGamma:    a(s) = (1 + s/alpha)^(-H), H > 1
///
/// H <= 1 is rejected because the trawl set would have infinite area.
class TrawlSpec {
 public:
  struct Exponential {
    double lambda;
  };
  struct SupGamma {
    double alpha;
    double H;
  };
  using Kind = std::variant<Exponential, SupGamma>;

  static TrawlSpec exponential(double lambda);
  static TrawlSpec sup_gamma(double alpha, double H);

  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_exponential() const noexcept {
    return std::holds_alternative<Exponential>(kind_);
  }
  [[nodiscard]] std::string describe() const;

 private:
  explicit TrawlSpec(Kind k) : kind_(k) {}
  Kind kind_;
};

/// a(t). Throws DomainError for t < 0.
[[nodiscard]] double eval_trawl(const TrawlSpec& spec, double t);

/// phi(t) = -a'(t). Throws DomainError for t < 0.
[[nodiscard]] double eval_phi(const TrawlSpec& spec, double t);

/// Leb(A) = integral of a over [0, inf).
[[nodiscard]] double leb_A(const TrawlSpec& spec);

/// Leb(A ∩ A_h) = integral of a over [h, inf). Throws DomainError for h < 0.
[[nodiscard]] double leb_intersection(const TrawlSpec& spec, double h);

/// Leb(A \ A_h) = Leb(A) - Leb(A ∩ A_h).
[[nodiscard]] double leb_setminus(const TrawlSpec& spec, double h);

/// Autocovariance of the trawl process for a unit-variance seed: Leb(A ∩ A_|h|).
[[nodiscard]] double theoretical_acf(const TrawlSpec& spec, double h);

/// integral of a over [x, y] for 0 <= x <= y, evaluated without cancellation
/// when y - x is small relative to x.
[[nodiscard]] double trawl_integral(const TrawlSpec& spec, double x, double y);

/// Smallest T with integral of a over [T, inf) <= rel_tol * Leb(A).
[[nodiscard]] double tail_time(const TrawlSpec& spec, double rel_tol);

/// integral of a(s)^2 over [0, inf).
[[nodiscard]] double trawl_square_integral(const TrawlSpec& spec);

/// Levy seed law L'. The study parameterisations have unit variance; the
/// normalized constructors derive the free parameter from Var(L') = 1.
class SeedSpec {
 public:
  /// P(L' = x) = Gamma(m + x) / (Gamma(m) x!) (1 - theta)^m theta^x.
  struct NegBin {
    double m;
    double theta;
  };
  struct Gamma {
    double shape;
    double scale;
  };
  struct Gaussian {
    double mean;
    double variance;
  };
  using Kind = std::variant<NegBin, Gamma, Gaussian>;

  /// m = (1 - theta)^2 / theta.
  static SeedSpec negbin(double theta);
  /// scale = 1 / sqrt(shape).
  static SeedSpec gamma(double shape);
  static SeedSpec gaussian(double mean);

  static SeedSpec negbin_unchecked(double m, double theta);
  static SeedSpec gamma_unchecked(double shape, double scale);
  static SeedSpec gaussian_unchecked(double mean, double variance);

  [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_gaussian() const noexcept {
    return std::holds_alternative<Gaussian>(kind_);
  }
  [[nodiscard]] std::string describe() const;

 private:
  explicit SeedSpec(Kind k) : kind_(k) {}
  Kind kind_;
};

struct SeedMoments {
  double mean;
  double variance;
  double c4;  ///< fourth cumulant
};

[[nodiscard]] SeedMoments seed_moments(const SeedSpec& seed);

}  // namespace trawlkit
