#include "triosc/profiles.hpp"

#include <cmath>

#include "triosc/errors.hpp"

namespace triosc {

std::string to_string(ProfileFamily f) {
    switch (f) {
        case ProfileFamily::Constant: return "constant";
        case ProfileFamily::Polynomial: return "polynomial";
        case ProfileFamily::Exponential: return "exponential";
        case ProfileFamily::Sinusoid: return "sinusoid";
    }
    return "constant";
}

ProfileFamily profile_family_from_string(const std::string& s) {
    if (s == "constant") return ProfileFamily::Constant;
    if (s == "polynomial") return ProfileFamily::Polynomial;
    if (s == "exponential") return ProfileFamily::Exponential;
    if (s == "sinusoid") return ProfileFamily::Sinusoid;
    throw NumericalError(ErrorKind::UsageError, "unknown profile family '" + s +
                                                    "' (expected constant, polynomial, "
                                                    "exponential or sinusoid)");
}

TimeProfile::TimeProfile(ProfileFamily family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
    const std::size_t n = params_.size();
    bool ok = true;
    switch (family_) {
        case ProfileFamily::Constant: ok = n == 1; break;
        case ProfileFamily::Polynomial: ok = n >= 1; break;
        case ProfileFamily::Exponential: ok = n == 2; break;
        case ProfileFamily::Sinusoid: ok = n == 4; break;
    }
    if (!ok) {
        throw NumericalError(ErrorKind::UsageError,
                             "profile family " + to_string(family_) +
                                 " received a wrong parameter count (" + std::to_string(n) + ")");
    }
}

TimeProfile TimeProfile::constant(double a) { return TimeProfile(ProfileFamily::Constant, {a}); }

TimeProfile TimeProfile::polynomial(std::vector<double> coefficients) {
    return TimeProfile(ProfileFamily::Polynomial, std::move(coefficients));
}

TimeProfile TimeProfile::exponential(double a, double gamma) {
    return TimeProfile(ProfileFamily::Exponential, {a, gamma});
}

TimeProfile TimeProfile::sinusoid(double offset, double amplitude, double omega, double phase) {
    return TimeProfile(ProfileFamily::Sinusoid, {offset, amplitude, omega, phase});
}

double TimeProfile::value(double t) const {
    switch (family_) {
        case ProfileFamily::Constant: return params_[0];
        case ProfileFamily::Polynomial: {
            double acc = 0.0;
            for (std::size_t i = params_.size(); i-- > 0;) acc = acc * t + params_[i];
            return acc;
        }
        case ProfileFamily::Exponential: return params_[0] * std::exp(params_[1] * t);
        case ProfileFamily::Sinusoid:
            return params_[0] + params_[1] * std::sin(params_[2] * t + params_[3]);
    }
    return 0.0;
}

double TimeProfile::d1(double t) const {
    switch (family_) {
        case ProfileFamily::Constant: return 0.0;
        case ProfileFamily::Polynomial: {
            double acc = 0.0;
            for (std::size_t i = params_.size(); i-- > 1;)
                acc = acc * t + static_cast<double>(i) * params_[i];
            return acc;
        }
        case ProfileFamily::Exponential: return params_[0] * params_[1] * std::exp(params_[1] * t);
        case ProfileFamily::Sinusoid:
            return params_[1] * params_[2] * std::cos(params_[2] * t + params_[3]);
    }
    return 0.0;
}

double TimeProfile::d2(double t) const {
    switch (family_) {
        case ProfileFamily::Constant: return 0.0;
        case ProfileFamily::Polynomial: {
            double acc = 0.0;
            for (std::size_t i = params_.size(); i-- > 2;)
                acc = acc * t + static_cast<double>(i) * static_cast<double>(i - 1) * params_[i];
            return acc;
        }
        case ProfileFamily::Exponential:
            return params_[0] * params_[1] * params_[1] * std::exp(params_[1] * t);
        case ProfileFamily::Sinusoid:
            return -params_[1] * params_[2] * params_[2] * std::sin(params_[2] * t + params_[3]);
    }
    return 0.0;
}

}  // namespace triosc
