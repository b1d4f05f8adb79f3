#pragma once

#include <stdexcept>
#include <string>

namespace infdiff {

// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands with mismatched truncation orders or batch sizes, or a violated
// precondition on an argument.
class contract_violation : public error {
public:
    using error::error;
};

// Division by a quantity whose leading coefficient is not invertible.
class infinitesimal_divisor : public error {
public:
    using error::error;
};

// A left shift would discard a nonzero leading coefficient, i.e. the result
// would need a negative power of the infinitesimal.
class infinite_part : public error {
public:
    using error::error;
};

// An analytic function was lifted at a constant term outside its domain.
class domain_error : public error {
public:
    using error::error;
};

class insufficient_jet_order : public error {
public:
    using error::error;
};

// A Taylor coefficient became non-finite while building an expansion.
class divergence_error : public error {
public:
    divergence_error(int order, const std::string& what)
        : error(what), order_(order) {}

    int order() const noexcept { return order_; }

private:
    int order_;
};

class lookup_error : public error {
public:
    using error::error;
};

class no_exact_oracle : public error {
public:
    using error::error;
};

class sampling_error : public error {
public:
    using error::error;
};

// The method-of-lines reference produced a non-finite state. Callers treat
// the comparison as inconclusive.
class oracle_failure : public error {
public:
    using error::error;
};

} // namespace infdiff
