#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "npf/error.hpp"
#include "npf/primes.hpp"
#include "npf/qexp.hpp"

namespace npf::qexp {

namespace {

constexpr std::string_view kMagic = "# npf-coeffs v1";

bool parse_u64(std::string_view s, std::uint64_t& out) {
    if (s.empty() || s.front() == '+' || s.front() == '-') return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_signed_decimal(std::string_view s, BigInt& out) {
    std::string_view digits = s;
    if (!digits.empty() && digits.front() == '-') digits.remove_prefix(1);
    if (digits.empty()) return false;
    for (char c : digits)
        if (c < '0' || c > '9') return false;
    return out.set_str(std::string(s), 10) == 0;
}

}  // namespace

FormHandle ingest_form(std::istream& in, FormSource source, std::uint64_t table_bound) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    if (!next_line() || line != kMagic) throw FormatError(1, "malformed header: expected '" + std::string(kMagic) + "'");

    if (!next_line()) throw FormatError(2, "malformed header: missing level/weight/label line");
    static const std::regex header(R"(# level=([0-9]+) weight=([0-9]+) label=(\S+))");
    std::smatch m;
    if (!std::regex_match(line, m, header))
        throw FormatError(2, "malformed header: expected '# level=<int> weight=<int> label=<string>'");
    std::uint64_t level = 0, weight = 0;
    if (!parse_u64(m[1].str(), level) || level == 0) throw FormatError(2, "malformed header: level must be positive");
    if (!parse_u64(m[2].str(), weight) || weight < 4 || weight % 2 != 0 || weight > 1000)
        throw FormatError(2, "malformed header: weight must be an even integer >= 4");

    FormHandle::Spec spec;
    spec.level = level;
    spec.weight = static_cast<unsigned>(weight);
    spec.label = m[3].str();
    spec.source = source;
    spec.table_bound = table_bound;

    std::uint64_t last = 0;
    bool saw_blank = false;
    while (next_line()) {
        if (line.empty()) {
            saw_blank = true;
            continue;
        }
        if (saw_blank) throw FormatError(lineno - 1, "blank line inside the coefficient table");
        const auto space = line.find(' ');
        if (space == std::string::npos || line.find(' ', space + 1) != std::string::npos)
            throw FormatError(lineno, "expected '<p> <a_p>' separated by a single space");
        std::uint64_t p = 0;
        BigInt ap;
        if (!parse_u64(std::string_view(line).substr(0, space), p))
            throw FormatError(lineno, "index is not a decimal integer");
        if (!parse_signed_decimal(std::string_view(line).substr(space + 1), ap))
            throw FormatError(lineno, "coefficient is not a decimal integer");
        if (!is_prime_u64(p)) throw FormatError(lineno, "index " + std::to_string(p) + " is not prime");
        if (p == last) throw FormatError(lineno, "duplicate prime " + std::to_string(p));
        if (p < last) throw FormatError(lineno, "primes not ascending (" + std::to_string(p) + " after " +
                                                    std::to_string(last) + ")");
        if (level % p != 0 && !within_deligne_bound(ap, p, spec.weight))
            throw FormatError(lineno, "a_" + std::to_string(p) + " = " + ap.get_str() +
                                          " violates the Deligne bound |a_p| <= 2p^((k-1)/2)");
        spec.ap_table.emplace(p, std::move(ap));
        last = p;
    }
    return FormHandle(std::move(spec));
}

FormHandle ingest_form_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open coefficient file " + path.string());
    return ingest_form(in);
}

void write_coefficient_file(std::ostream& out, const FormHandle& form) {
    out << kMagic << '\n';
    out << "# level=" << form.level() << " weight=" << form.weight() << " label=" << form.label() << '\n';
    for (const auto& [p, a] : form.ap_table()) out << p << ' ' << a.get_str() << '\n';
}

FormHandle cached_eigenform(int k, std::size_t N, const std::filesystem::path& cache_dir, std::size_t ceiling) {
    if (N > ceiling)
        throw std::length_error("requested precision " + std::to_string(N) + " exceeds the precision ceiling " +
                                std::to_string(ceiling));
    const auto path = cache_dir / (eigenform_label(k) + "-N" + std::to_string(N) + ".coeffs");
    if (std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        FormHandle form = ingest_form(in, FormSource::computed_level_one, N - 1);
        if (form.weight() != static_cast<unsigned>(k) || form.level() != 1)
            throw std::runtime_error("cache file " + path.string() + " does not hold weight " + std::to_string(k));
        return form;
    }
    FormHandle form = eigenform_expansion(k, N, ceiling);
    std::filesystem::create_directories(cache_dir);
    // write-then-rename so a concurrent reader never sees a partial file
    auto tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        write_coefficient_file(out, form);
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
    return form;
}

}  // namespace npf::qexp
