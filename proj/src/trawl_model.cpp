#include "trawlkit/trawl_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "trawlkit/errors.hpp"

namespace trawlkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_nonnegative(double t, const char* what) {
  if (!(t >= 0.0)) {
    throw DomainError(std::string(what) + " must be non-negative, got " + std::to_string(t));
  }
}

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

TrawlSpec TrawlSpec::exponential(double lambda) {
  if (!positive_finite(lambda)) {
    throw DomainError("exponential trawl requires lambda > 0");
  }
  return TrawlSpec(Exponential{lambda});
}

TrawlSpec TrawlSpec::sup_gamma(double alpha, double H) {
  if (!positive_finite(alpha)) {
    throw DomainError("supGamma trawl requires alpha > 0");
  }
  if (!(H > 1.0) || !std::isfinite(H)) {
    throw DomainError("supGamma trawl requires H > 1 (Leb(A) is infinite otherwise)");
  }
  return TrawlSpec(SupGamma{alpha, H});
}

std::string TrawlSpec::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const Exponential& e) { os << "exp(lambda=" << e.lambda << ")"; },
                        [&](const SupGamma& s) {
                          os << "supgamma(alpha=" << s.alpha << ", H=" << s.H << ")";
                        }},
             kind_);
  return os.str();
}

double eval_trawl(const TrawlSpec& spec, double t) {
  require_nonnegative(t, "t");
  return std::visit(
      overloaded{[&](const TrawlSpec::Exponential& e) { return std::exp(-e.lambda * t); },
                 [&](const TrawlSpec::SupGamma& s) { return std::pow(1.0 + t / s.alpha, -s.H); }},
      spec.kind());
}

double eval_phi(const TrawlSpec& spec, double t) {
  require_nonnegative(t, "t");
  return std::visit(overloaded{[&](const TrawlSpec::Exponential& e) {
                                 return e.lambda * std::exp(-e.lambda * t);
                               },
                               [&](const TrawlSpec::SupGamma& s) {
                                 return (s.H / s.alpha) * std::pow(1.0 + t / s.alpha, -s.H - 1.0);
                               }},
                    spec.kind());
}

double leb_A(const TrawlSpec& spec) {
  return std::visit(overloaded{[](const TrawlSpec::Exponential& e) { return 1.0 / e.lambda; },
                               [](const TrawlSpec::SupGamma& s) { return s.alpha / (s.H - 1.0); }},
                    spec.kind());
}

double leb_intersection(const TrawlSpec& spec, double h) {
  require_nonnegative(h, "h");
  return std::visit(overloaded{[&](const TrawlSpec::Exponential& e) {
                                 return std::exp(-e.lambda * h) / e.lambda;
                               },
                               [&](const TrawlSpec::SupGamma& s) {
                                 return s.alpha / (s.H - 1.0) *
                                        std::pow(1.0 + h / s.alpha, 1.0 - s.H);
                               }},
                    spec.kind());
}

double leb_setminus(const TrawlSpec& spec, double h) {
  return leb_A(spec) - leb_intersection(spec, h);
}

double theoretical_acf(const TrawlSpec& spec, double h) {
  return leb_intersection(spec, std::abs(h));
}

double trawl_integral(const TrawlSpec& spec, double x, double y) {
  require_nonnegative(x, "x");
  if (y < x) {
    throw DomainError("trawl_integral requires x <= y");
  }
  if (std::isinf(y)) {
    return leb_intersection(spec, x);
  }
  return std::visit(
      overloaded{[&](const TrawlSpec::Exponential& e) {
                   return std::exp(-e.lambda * x) * -std::expm1(-e.lambda * (y - x)) / e.lambda;
                 },
                 [&](const TrawlSpec::SupGamma& s) {
                   // F(x) - F(y) with F(u) = alpha/(H-1) (1+u/alpha)^(1-H)
                   const double log_ratio = std::log1p((y - x) / (s.alpha + x));
                   return leb_intersection(spec, x) * -std::expm1((1.0 - s.H) * log_ratio);
                 }},
      spec.kind());
}

double tail_time(const TrawlSpec& spec, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("tail tolerance must lie in (0,1)");
  }
  return std::visit(overloaded{[&](const TrawlSpec::Exponential& e) {
                                 return -std::log(rel_tol) / e.lambda;
                               },
                               [&](const TrawlSpec::SupGamma& s) {
                                 return s.alpha * std::expm1(std::log(rel_tol) / (1.0 - s.H));
                               }},
                    spec.kind());
}

double trawl_square_integral(const TrawlSpec& spec) {
  return std::visit(
      overloaded{[](const TrawlSpec::Exponential& e) { return 0.5 / e.lambda; },
                 [](const TrawlSpec::SupGamma& s) { return s.alpha / (2.0 * s.H - 1.0); }},
      spec.kind());
}

SeedSpec SeedSpec::negbin(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw DomainError("negative binomial seed requires theta in (0,1)");
  }
  return SeedSpec(NegBin{(1.0 - theta) * (1.0 - theta) / theta, theta});
}

SeedSpec SeedSpec::gamma(double shape) {
  if (!positive_finite(shape)) {
    throw DomainError("gamma seed requires shape > 0");
  }
  return SeedSpec(Gamma{shape, 1.0 / std::sqrt(shape)});
}

SeedSpec SeedSpec::gaussian(double mean) {
  if (!std::isfinite(mean)) {
    throw DomainError("gaussian seed requires a finite mean");
  }
  return SeedSpec(Gaussian{mean, 1.0});
}

SeedSpec SeedSpec::negbin_unchecked(double m, double theta) {
  if (!positive_finite(m) || !(theta > 0.0 && theta < 1.0)) {
    throw DomainError("negative binomial seed requires m > 0 and theta in (0,1)");
  }
  return SeedSpec(NegBin{m, theta});
}

SeedSpec SeedSpec::gamma_unchecked(double shape, double scale) {
  if (!positive_finite(shape) || !positive_finite(scale)) {
    throw DomainError("gamma seed requires shape > 0 and scale > 0");
  }
  return SeedSpec(Gamma{shape, scale});
}

SeedSpec SeedSpec::gaussian_unchecked(double mean, double variance) {
  if (!std::isfinite(mean) || !positive_finite(variance)) {
    throw DomainError("gaussian seed requires a finite mean and variance > 0");
  }
  return SeedSpec(Gaussian{mean, variance});
}

std::string SeedSpec::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const NegBin& s) { os << "negbin(m=" << s.m << ", theta=" << s.theta << ")"; },
                        [&](const Gamma& s) {
                          os << "gamma(shape=" << s.shape << ", scale=" << s.scale << ")";
                        },
                        [&](const Gaussian& s) {
                          os << "gaussian(mean=" << s.mean << ", variance=" << s.variance << ")";
                        }},
             kind_);
  return os.str();
}

SeedMoments seed_moments(const SeedSpec& seed) {
  return std::visit(
      overloaded{[](const SeedSpec::NegBin& s) {
                   const double q = 1.0 - s.theta;
                   const double th = s.theta;
                   return SeedMoments{s.m * th / q, s.m * th / (q * q),
                                      s.m * th * (th * th + 4.0 * th + 1.0) / std::pow(th - 1.0, 4)};
                 },
                 [](const SeedSpec::Gamma& s) {
                   return SeedMoments{s.shape * s.scale, s.shape * s.scale * s.scale,
                                      6.0 * s.shape * std::pow(s.scale, 4)};
                 },
                 [](const SeedSpec::Gaussian& s) { return SeedMoments{s.mean, s.variance, 0.0}; }},
      seed.kind());
}

}  // namespace trawlkit
