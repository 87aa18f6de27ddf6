#pragma once

#include <stdexcept>
#include <string>

namespace ffsuite {

enum class Errc {
    DivisionByZero,
    InvalidPoint,
    DeserializeError,
    BuilderError,
    UnsatisfiedConstraint,
    ArityMismatch,
    GadgetError,
    QuantizationError,
    ShapeMismatch,
    ConfigError,
    ManifestMismatch,
    SignatureInvalid,
    UnsatisfiedWitness,
    ParseError,
    IoError,
};

const char* errc_name(Errc c);

/// Project-wide exception; carries a machine-checkable code plus context.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::InvalidPoint: return "InvalidPoint";
    case Errc::DeserializeError: return "DeserializeError";
    case Errc::BuilderError: return "BuilderError";
    case Errc::UnsatisfiedConstraint: return "UnsatisfiedConstraint";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::GadgetError: return "GadgetError";
    case Errc::QuantizationError: return "QuantizationError";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::ConfigError: return "ConfigError";
    case Errc::ManifestMismatch: return "ManifestMismatch";
    case Errc::SignatureInvalid: return "SignatureInvalid";
    case Errc::UnsatisfiedWitness: return "UnsatisfiedWitness";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    }
    return "Error";
}

}  // namespace ffsuite
