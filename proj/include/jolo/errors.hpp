#pragma once

#include <stdexcept>
#include <string>

namespace jolo {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Input data failed validation (bad file, nonpositive value, invalid r, ...).
class data_error : public error {
public:
    explicit data_error(const std::string& what) : error(what) {}
};

// All observed failures come from one population (m_r is 0 or r), so the
// two-population MLE does not exist and profile/EM fitting is undefined.
class degenerate_indicator_error : public data_error {
public:
    explicit degenerate_indicator_error(const std::string& what) : data_error(what) {}
};

// A numerical procedure failed irrecoverably (singular information matrix,
// all-zero importance weights, bootstrap failure rate above 50%, ...).
class numerical_error : public error {
public:
    explicit numerical_error(const std::string& what) : error(what) {}
};

// Bad command-line usage.
class usage_error : public error {
public:
    explicit usage_error(const std::string& what) : error(what) {}
};

// Stable CLI exit codes.
enum exit_code : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_data = 3,
    exit_numeric = 4,
};

} // namespace jolo
