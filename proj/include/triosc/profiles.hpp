#pragma once

// Analytic time-profile families for masses, stiffnesses and couplings.
// Every family carries exact first and second derivatives because the
// effective frequency formula contains the second mass derivative and
// differentiating samples twice is too noisy at the tolerances used here.

#include <cstddef>
#include <string>
#include <vector>

namespace triosc {

enum class ProfileFamily {
    Constant,     // params: {a}
    Polynomial,   // params: coefficients, ascending powers
    Exponential,  // params: {a, gamma}, a * exp(gamma * t)
    Sinusoid,     // params: {offset, amplitude, omega, phase}
};

std::string to_string(ProfileFamily f);
ProfileFamily profile_family_from_string(const std::string& s);

class TimeProfile {
  public:
    TimeProfile() : family_(ProfileFamily::Constant), params_{0.0} {}
    // Throws UsageError when the parameter count does not fit the family.
    TimeProfile(ProfileFamily family, std::vector<double> params);

    static TimeProfile constant(double a);
    static TimeProfile polynomial(std::vector<double> coefficients);
    static TimeProfile exponential(double a, double gamma);
    static TimeProfile sinusoid(double offset, double amplitude, double omega, double phase);

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;

    ProfileFamily family() const { return family_; }
    const std::vector<double>& params() const { return params_; }

  private:
    ProfileFamily family_;
    std::vector<double> params_;
};

}  // namespace triosc
