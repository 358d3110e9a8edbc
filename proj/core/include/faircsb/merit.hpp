#pragma once

#include <span>
#include <variant>
#include <vector>

namespace faircsb {

// Positive map from an expected reward in [0,1] to a merit value. Carries its
// declared minimum merit (lambda) and Lipschitz constant; validate() checks
// both on a dense grid rather than symbolically, so tabulated maps get the
// same contract as the closed forms.
class MeritFunction {
  public:
    // f(mu) = offset + weight * mu^exponent, with offset > 0, weight >= 0,
    // exponent >= 1.
    static MeritFunction power_plus(double offset, double weight, double exponent);

    // f(mu) = mu. Constructible (it appears in exact fixtures) but fails
    // validate(): its minimum merit on [0,1] is 0.
    static MeritFunction identity();

    // Piecewise-linear map through equally spaced knots on [0,1];
    // values.size() >= 2.
    static MeritFunction tabulated(std::vector<double> values);

    double operator()(double mu) const;

    double min_merit() const;  // declared lambda
    double lipschitz() const;  // declared M

    // Checks minimum merit > 0 and the declared Lipschitz constant on a
    // 10^4-point grid; throws std::domain_error on violation.
    void validate() const;

  private:
    struct PowerPlusForm {
        double offset, weight, exponent;
    };
    struct IdentityForm {};
    struct TabulatedForm {
        std::vector<double> values;
    };
    using Form = std::variant<PowerPlusForm, IdentityForm, TabulatedForm>;

    explicit MeritFunction(Form form) : form_(std::move(form)) {}
    Form form_;
};

// max f / min f over [0,1] (grid plus endpoints) against (K-1)/(L-1).
// Vacuously true for L == 1. Throws std::domain_error when min f <= 0, since
// the ratio is then unbounded and the minimum-merit guard applies first.
bool check_ratio_assumption(const MeritFunction& f, int num_arms, int subset_size);

// The unique fair policy p*_a = L f(mu_a) / sum_a' f(mu_a'). Requires
// f(mu_a) > 0 for the given means and rejects results outside [0,1]
// coordinatewise (which the merit-ratio assumption would have prevented).
std::vector<double> optimal_policy(const MeritFunction& f, std::span<const double> means,
                                   int subset_size);

}  // namespace faircsb
