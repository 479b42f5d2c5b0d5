#pragma once

#include <stdexcept>
#include <string>

namespace heckmort {

/// Failure categories surfaced by the engine. Each maps to a documented
/// contract violation; the CLI reports them with exit code 3.
enum class ErrorKind {
    InsufficientPrecision,     // requested horizon not reachable from inputs
    HalfPowerOfNegative,       // fractional power of a negative-coefficient monomial
    NonrepresentablePower,     // fractional power whose exact value is irrational
    PoleAtSpecialization,      // an Appell-sum denominator or theta divisor vanishes
    WindowViolation,           // a q-order window hypothesis fails
    NonUnitFactor,             // inversion of a series with no invertible leading term
    UnknownBuiltin,            // builtin series name not in the table
    NonGenericSpecialization,  // substitution makes a divisor theta identically zero
    NonterminatingEnumeration, // adaptive lattice enumeration hit its growth cap
};

class EngineError : public std::runtime_error {
public:
    EngineError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
        case ErrorKind::HalfPowerOfNegative: return "HalfPowerOfNegative";
        case ErrorKind::NonrepresentablePower: return "NonrepresentablePower";
        case ErrorKind::PoleAtSpecialization: return "PoleAtSpecialization";
        case ErrorKind::WindowViolation: return "WindowViolation";
        case ErrorKind::NonUnitFactor: return "NonUnitFactor";
        case ErrorKind::UnknownBuiltin: return "UnknownBuiltin";
        case ErrorKind::NonGenericSpecialization: return "NonGenericSpecialization";
        case ErrorKind::NonterminatingEnumeration: return "NonterminatingEnumeration";
    }
    return "EngineError";
}

}  // namespace heckmort
