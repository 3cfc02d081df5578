#include <sstream>

#include "npf/cli.hpp"

namespace npf::cli {

namespace {

// Row 15307 carries 3^5. A `3*5` there would put |τ(15307)| far past the
// Deligne bound.
constexpr std::string_view kExpected =
    "| p | N_p(Delta) |\n"
    "|---|---|\n"
    "| 5 | 2^10*3*23*691 |\n"
    "| 7 | 2^9*3^5*23*691 |\n"
    "| 577 | 2^13*3^7*691*190641378938814930857 |\n"
    "| 1153 | 2^13*3^6*691*1160183970784175844330767 |\n"
    "| 1297 | 2^11*3^6*691*16935741217449799251621239 |\n"
    "| 3803 | 2^8*3*691*4534718285139898177401117938327717 |\n"
    "| 5693 | 2^10*3*691*95907763393686429420185450510493683 |\n"
    "| 11317 | 2^10*3^5*691*2268089547548261526855554962441076239 |\n"
    "| 14437 | 2^10*3^6*691*11008825527208610156044088966777471773 |\n"
    "| 15307 | 2^8*3^5*691*251458672161512059369128893956312797721 |\n";

std::vector<std::string_view> split_lines(std::string_view s) {
    std::vector<std::string_view> lines;
    while (!s.empty()) {
        const auto nl = s.find('\n');
        lines.push_back(s.substr(0, nl));
        if (nl == std::string_view::npos) break;
        s.remove_prefix(nl + 1);
    }
    return lines;
}

}  // namespace

std::string_view table71_expected() { return kExpected; }

std::string render_table71(const std::vector<npstats::NpRecord>& records) {
    std::ostringstream os;
    os << "| p | N_p(Delta) |\n|---|---|\n";
    for (const auto& r : records) os << "| " << r.p << " | " << r.factorization.render() << " |\n";
    return os.str();
}

std::vector<std::string> table_diff(std::string_view expected, std::string_view actual) {
    const auto e = split_lines(expected), a = split_lines(actual);
    std::vector<std::string> out;
    const std::size_t n = std::max(e.size(), a.size());
    for (std::size_t i = 0; i < n; ++i) {
        const bool has_e = i < e.size(), has_a = i < a.size();
        if (has_e && has_a && e[i] == a[i]) continue;
        if (has_e) out.push_back("-" + std::string(e[i]));
        if (has_a) out.push_back("+" + std::string(a[i]));
    }
    return out;
}

}  // namespace npf::cli
