#pragma once

// Exact q-expansions for level-one modular forms, plus the coefficient-file
// path for newforms computed elsewhere.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "npf/bigint.hpp"

namespace npf::qexp {

/// Requests for more coefficients than this are refused.
inline constexpr std::size_t kDefaultPrecisionCeiling = 100001;

/// Truncated power series Σ c_n qⁿ, n < precision, with exact integer coefficients.
class IntSeries {
public:
    /// Zero series; precision must be ≥ 1.
    explicit IntSeries(std::size_t precision);
    explicit IntSeries(std::vector<BigInt> coeffs);

    static IntSeries one(std::size_t precision);

    std::size_t precision() const noexcept { return coeffs_.size(); }
    const BigInt& operator[](std::size_t n) const { return coeffs_[n]; }
    BigInt& operator[](std::size_t n) { return coeffs_[n]; }
    std::span<const BigInt> coeffs() const noexcept { return coeffs_; }

    IntSeries truncated(std::size_t precision) const;

    friend bool operator==(const IntSeries&, const IntSeries&) = default;

private:
    std::vector<BigInt> coeffs_;
};

IntSeries operator+(const IntSeries& a, const IntSeries& b);
IntSeries operator-(const IntSeries& a, const IntSeries& b);

/// Product truncated to min(a.precision(), b.precision()). Large operands go
/// through Kronecker substitution on GMP's multiplier; the result is
/// bit-identical to series_mul_schoolbook.
IntSeries series_mul(const IntSeries& a, const IntSeries& b);
IntSeries series_mul_schoolbook(const IntSeries& a, const IntSeries& b);

/// a^e by repeated squaring; a^0 is the constant series 1.
IntSeries series_pow(const IntSeries& a, unsigned e);

/// ∏_{n≥1}(1 − qⁿ) to precision N via Euler's pentagonal-number expansion.
IntSeries eta_product(std::size_t N);

/// −2k/B_k for k ∈ {4,6,8,10,14}; throws std::logic_error if not integral.
BigInt eisenstein_constant(int k);

/// E_k = 1 + c_k Σ σ_{k−1}(n) qⁿ for k ∈ {4,6,8,10,14}.
IntSeries eisenstein_expansion(int k, std::size_t N, std::size_t ceiling = kDefaultPrecisionCeiling);

enum class FormSource { computed_level_one, ingested };

std::string_view to_string(FormSource s);

/// Normalized newform with trivial character and integer coefficients.
///
/// Immutable once built; copies share storage. Construction rejects any
/// stored a_p with p ∤ level that breaks |a_p| ≤ 2p^((k−1)/2).
class FormHandle {
public:
    struct Spec {
        unsigned weight = 0;
        std::uint64_t level = 1;
        std::string label;
        std::map<std::uint64_t, BigInt> ap_table;
        FormSource source = FormSource::ingested;
        /// Largest p for which a_p is claimed to be available.
        std::uint64_t table_bound = 0;
        /// Full coefficient list when the form was computed here.
        std::shared_ptr<const IntSeries> series;
    };

    explicit FormHandle(Spec spec);

    unsigned weight() const noexcept { return data_->weight; }
    std::uint64_t level() const noexcept { return data_->level; }
    const std::string& label() const noexcept { return data_->label; }
    FormSource source() const noexcept { return data_->source; }
    std::uint64_t table_bound() const noexcept { return data_->table_bound; }
    const std::map<std::uint64_t, BigInt>& ap_table() const noexcept { return data_->ap_table; }
    /// nullptr for forms that were ingested or loaded from cache.
    const IntSeries* series() const noexcept { return data_->series.get(); }

    bool is_good_prime(std::uint64_t p) const noexcept { return data_->level % p != 0; }

    /// a_p, or CoefficientUnavailable naming p.
    const BigInt& ap(std::uint64_t p) const;

private:
    std::shared_ptr<const Spec> data_;
};

/// Weights with a one-dimensional level-one cusp space.
inline constexpr int kEigenformWeights[] = {12, 16, 18, 20, 22, 26};

bool is_eigenform_weight(int k);

/// Label used for the level-one eigenform of weight k, e.g. "delta12".
std::string eigenform_label(int k);

/// Δ_k = Δ·E_{k−12} with Δ = (E_4³ − E_6²)/1728, coefficients q⁰..q^{N−1}.
FormHandle eigenform_expansion(int k, std::size_t N, std::size_t ceiling = kDefaultPrecisionCeiling);

/// a_n from the a_p table through the Hecke relations.
BigInt hecke_coefficient(const FormHandle& form, std::uint64_t n);

/// a_0..a_N (a_0 = 0) through the Hecke relations; same contract as above.
std::vector<BigInt> hecke_table(const FormHandle& form, std::uint64_t N);

/// Parses a coefficient file (`# npf-coeffs v1`). A table_bound of 0 means
/// "largest listed prime".
FormHandle ingest_form(std::istream& in, FormSource source = FormSource::ingested,
                       std::uint64_t table_bound = 0);
FormHandle ingest_form_file(const std::filesystem::path& path);

void write_coefficient_file(std::ostream& out, const FormHandle& form);

/// Reads `<cache_dir>/<label>-N<N>.coeffs` if present, else computes and writes it.
FormHandle cached_eigenform(int k, std::size_t N, const std::filesystem::path& cache_dir,
                            std::size_t ceiling = kDefaultPrecisionCeiling);

}  // namespace npf::qexp
