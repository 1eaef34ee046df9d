#pragma once

#include <stdexcept>
#include <string>

namespace adiwkb {

// Numerical failure with a stable name; the CLI prints the name on stderr and
// maps every NumericError to exit code 3.
class NumericError : public std::runtime_error {
public:
    NumericError(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

struct DegenerateSpectrum : NumericError {
    explicit DegenerateSpectrum(const std::string& w) : NumericError("DegenerateSpectrum", w) {}
};

struct UnsupportedDimension : NumericError {
    explicit UnsupportedDimension(const std::string& w) : NumericError("UnsupportedDimension", w) {}
};

struct AlphaZero : NumericError {
    explicit AlphaZero(const std::string& w) : NumericError("AlphaZero", w) {}
};

struct BranchCollision : NumericError {
    explicit BranchCollision(const std::string& w) : NumericError("BranchCollision", w) {}
};

struct DenominatorVanishes : NumericError {
    explicit DenominatorVanishes(const std::string& w) : NumericError("DenominatorVanishes", w) {}
};

struct NoFarField : NumericError {
    explicit NoFarField(const std::string& w) : NumericError("NoFarField", w) {}
};

struct SingularCombination : NumericError {
    explicit SingularCombination(const std::string& w) : NumericError("SingularCombination", w) {}
};

struct ToleranceNotMet : NumericError {
    explicit ToleranceNotMet(const std::string& w) : NumericError("ToleranceNotMet", w) {}
};

struct AllSingular : NumericError {
    explicit AllSingular(const std::string& w) : NumericError("AllSingular", w) {}
};

// Configuration / input problem; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& w) : std::runtime_error(w) {}
};

}  // namespace adiwkb
