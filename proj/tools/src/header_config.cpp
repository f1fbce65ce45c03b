#include "header_config.hpp"

#include <cctype>
#include <sstream>

namespace lmpivot::cli {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool is_key_value(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) return false;
    for (std::size_t i = 0; i < eq; ++i) {
        const char c = s[i];
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    return true;
}

}  // namespace

std::vector<CLI::ConfigItem> HeaderConfig::from_config(std::istream& input) const {
    std::ostringstream filtered;
    std::string line;
    while (std::getline(input, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            t = trim(t.substr(1));
            if (is_key_value(t)) filtered << t << '\n';
            continue;
        }
        if (!is_key_value(t)) break;
        filtered << t << '\n';
    }
    std::istringstream in(filtered.str());
    return CLI::ConfigBase::from_config(in);
}

}  // namespace lmpivot::cli
