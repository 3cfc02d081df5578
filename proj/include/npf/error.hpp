#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace npf {

/// A Fourier coefficient a_p needed by a computation is not in the form's table.
class CoefficientUnavailable : public std::runtime_error {
public:
    explicit CoefficientUnavailable(std::uint64_t prime)
        : std::runtime_error("coefficient unavailable: a_" + std::to_string(prime) + " is not in the table"),
          prime_(prime) {}
    std::uint64_t prime() const noexcept { return prime_; }

private:
    std::uint64_t prime_;
};

/// p divides the level; N_p is not defined by the good-reduction formula there.
class ExcludedPrime : public std::invalid_argument {
public:
    ExcludedPrime(std::uint64_t prime, std::uint64_t level)
        : std::invalid_argument("excluded prime: p=" + std::to_string(prime) + " divides the level " +
                                std::to_string(level)),
          prime_(prime) {}
    std::uint64_t prime() const noexcept { return prime_; }

private:
    std::uint64_t prime_;
};

/// Coefficient-file or config-file problem, tagged with its 1-based line.
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace npf
