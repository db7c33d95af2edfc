#include "mech/config.hpp"

#include <fstream>
#include <sstream>

namespace mech {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

long to_long(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long out = std::stol(v, &pos);
        require(pos == v.size(), "");
        return out;
    } catch (const std::exception&) {
        throw MechError("config: key '" + key + "' needs an integer, got '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double out = std::stod(v, &pos);
        require(pos == v.size(), "");
        return out;
    } catch (const std::exception&) {
        throw MechError("config: key '" + key + "' needs a number, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw MechError("config: key '" + key + "' needs a boolean, got '" + v + "'");
}

/// Parses fractions like "3/7" as well as plain numbers.
double to_fraction(const std::string& key, const std::string& v) {
    const auto slash = v.find('/');
    if (slash == std::string::npos) return to_double(key, v);
    const double num = to_double(key, v.substr(0, slash));
    const double den = to_double(key, v.substr(slash + 1));
    require(den != 0.0, "config: key '" + key + "' divides by zero");
    return num / den;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', "config: malformed section '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            require(section == "chiplet" || section == "highway" ||
                        section == "error_model" || section == "run",
                    "config: unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, "config: expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section.empty() ? key : section + "." + key;

        if (section == "chiplet") {
            if (key == "structure") {
                const auto s = structure_from_string(value);
                require(s.has_value(), "config: key 'chiplet.structure' has unknown value '" +
                                           value + "'");
                cfg.chip.structure = *s;
            } else if (key == "chiplet_rows") {
                cfg.chip.chiplet_rows = static_cast<int>(to_long(qual, value));
            } else if (key == "chiplet_cols") {
                cfg.chip.chiplet_cols = static_cast<int>(to_long(qual, value));
            } else if (key == "array_rows") {
                cfg.chip.array_rows = static_cast<int>(to_long(qual, value));
            } else if (key == "array_cols") {
                cfg.chip.array_cols = static_cast<int>(to_long(qual, value));
            } else if (key == "cross_sparsity") {
                cfg.chip.cross_sparsity = to_fraction(qual, value);
            } else {
                throw MechError("config: unknown key '" + qual + "'");
            }
        } else if (section == "highway") {
            if (key == "mesh_period_rows") {
                cfg.highway.mesh_period_rows = static_cast<int>(to_long(qual, value));
            } else if (key == "mesh_period_cols") {
                cfg.highway.mesh_period_cols = static_cast<int>(to_long(qual, value));
            } else if (key == "density_multiplier") {
                cfg.highway.density_multiplier = static_cast<int>(to_long(qual, value));
            } else if (key == "interleave") {
                cfg.highway.interleave = to_bool(qual, value);
            } else {
                throw MechError("config: unknown key '" + qual + "'");
            }
        } else if (section == "error_model") {
            if (key == "ratio_cross") {
                cfg.error_model.ratio_cross = to_double(qual, value);
            } else if (key == "ratio_meas") {
                cfg.error_model.ratio_meas = to_double(qual, value);
            } else if (key == "meas_depth") {
                cfg.error_model.meas_depth = to_double(qual, value);
            } else {
                throw MechError("config: unknown key '" + qual + "'");
            }
        } else if (section == "run") {
            if (key == "seed") {
                cfg.seed = static_cast<uint64_t>(to_long(qual, value));
            } else if (key == "min_targets") {
                cfg.min_targets = static_cast<int>(to_long(qual, value));
            } else {
                throw MechError("config: unknown key '" + qual + "'");
            }
        } else {
            throw MechError("config: key '" + key + "' outside any section");
        }
    }
    cfg.chip.validate();
    cfg.error_model.validate();
    require(cfg.min_targets >= 1, "config: key 'run.min_targets' must be >= 1");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), "config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_text(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[chiplet]\n";
    os << "structure = " << to_string(cfg.chip.structure) << "\n";
    os << "chiplet_rows = " << cfg.chip.chiplet_rows << "\n";
    os << "chiplet_cols = " << cfg.chip.chiplet_cols << "\n";
    os << "array_rows = " << cfg.chip.array_rows << "\n";
    os << "array_cols = " << cfg.chip.array_cols << "\n";
    os << "cross_sparsity = " << cfg.chip.cross_sparsity << "\n";
    os << "\n[highway]\n";
    os << "mesh_period_rows = " << cfg.highway.mesh_period_rows << "\n";
    os << "mesh_period_cols = " << cfg.highway.mesh_period_cols << "\n";
    os << "density_multiplier = " << cfg.highway.density_multiplier << "\n";
    os << "interleave = " << (cfg.highway.interleave ? "true" : "false") << "\n";
    os << "\n[error_model]\n";
    os << "ratio_cross = " << cfg.error_model.ratio_cross << "\n";
    os << "ratio_meas = " << cfg.error_model.ratio_meas << "\n";
    os << "meas_depth = " << cfg.error_model.meas_depth << "\n";
    os << "\n[run]\n";
    os << "seed = " << cfg.seed << "\n";
    os << "min_targets = " << cfg.min_targets << "\n";
    return os.str();
}

}  // namespace mech
