#include "config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "kljn/errors.hpp"

namespace kljn::cli {
namespace {

using Field = double SystemConfig::*;

const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table{
        {"r0", &SystemConfig::r0},
        {"r1", &SystemConfig::r1},
        {"t_eff", &SystemConfig::t_eff},
        {"bandwidth", &SystemConfig::bandwidth},
        {"gamma", &SystemConfig::gamma},
        {"beta", &SystemConfig::beta},
        {"delta", &SystemConfig::delta},
        {"d_coeff", &SystemConfig::d_coeff},
        {"oversampling", &SystemConfig::oversampling},
        {"boltzmann_k", &SystemConfig::boltzmann_k},
    };
    return table;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void set_config_value(SystemConfig& config, const std::string& key, double value) {
    for (const auto& [name, field] : fields()) {
        if (name == key) {
            config.*field = value;
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + key + "'");
}

SystemConfig parse_config(std::istream& in, SystemConfig base) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string text = trim(line.substr(eq + 1));
        double value = 0.0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || end != text.data() + text.size())
            throw ConfigError("config line " + std::to_string(line_no) + ": '" + text + "' is not a number");
        try {
            set_config_value(base, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

SystemConfig load_config(const std::filesystem::path& path, SystemConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    return parse_config(in, base);
}

std::string format_config(const SystemConfig& config) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& [name, field] : fields()) os << name << " = " << config.*field << '\n';
    return os.str();
}

nlohmann::ordered_json config_to_json(const SystemConfig& config) {
    nlohmann::ordered_json j;
    for (const auto& [name, field] : fields()) j[name] = config.*field;
    return j;
}

}  // namespace kljn::cli
