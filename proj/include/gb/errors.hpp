#pragma once

#include <stdexcept>
#include <string>

namespace gb {

// Bad caller input: schema violations, precondition failures, mismatched shapes.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

// Checked 64-bit arithmetic overflowed; inputs exceed the supported desk scale.
class ArithmeticOverflow : public std::overflow_error {
public:
    explicit ArithmeticOverflow(const std::string& msg) : std::overflow_error(msg) {}
};

// Numerical rank/eigenvalue decision fell inside the ambiguity window.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// A commutant element that should be scalar is not.
class NotLocallyUnitary : public std::runtime_error {
public:
    explicit NotLocallyUnitary(const std::string& msg) : std::runtime_error(msg) {}
};

// A section fails the constancy-across-components continuity axiom.
class DiscontinuousSection : public std::runtime_error {
public:
    explicit DiscontinuousSection(const std::string& msg) : std::runtime_error(msg) {}
};

// A supplied certificate contradicts itself on re-validation.
class InternalInconsistency : public std::runtime_error {
public:
    explicit InternalInconsistency(const std::string& msg) : std::runtime_error(msg) {}
};

// A bundle-isomorphism witness fails patch-independence.
class InvalidWitness : public std::runtime_error {
public:
    explicit InvalidWitness(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gb
