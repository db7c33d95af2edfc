#include "mech/serialize.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace mech {

namespace {

std::string fmt_angle(double a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", a);
    return buf;
}

const char* kind_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::RZ: return "rz";
        case GateKind::CX: return "cx";
        case GateKind::CZ: return "cz";
        case GateKind::CP: return "cp";
        case GateKind::SWAP: return "swap";
        case GateKind::BRIDGE: return "bridge";
        case GateKind::MEASURE: return "measure";
        case GateKind::COND_PAULI: return "cpauli";
    }
    return "?";
}

}  // namespace

std::string circuit_to_text(const Circuit& c) {
    std::ostringstream os;
    os << "qubits " << c.num_qubits() << "\n";
    os << "bits " << c.num_bits() << "\n";
    for (const GateOp& op : c.gates()) {
        switch (op.kind) {
            case GateKind::MEASURE:
                os << (op.basis == Basis::Z ? "measure_z" : "measure_x") << " q"
                   << op.q[0] << " -> c" << op.bit;
                break;
            case GateKind::COND_PAULI:
                os << "cpauli " << (op.pauli == 'X' ? 'x' : 'z') << " q" << op.q[0]
                   << " if c" << op.bit;
                break;
            case GateKind::RZ:
            case GateKind::CP:
                os << kind_name(op.kind);
                for (int i = 0; i < op.nq; ++i) os << " q" << op.q[i];
                os << " " << fmt_angle(op.angle);
                break;
            default:
                os << kind_name(op.kind);
                for (int i = 0; i < op.nq; ++i) os << " q" << op.q[i];
        }
        if (op.tag >= 0) os << " @" << op.tag;
        os << "\n";
    }
    return os.str();
}

namespace {

int parse_ref(const std::string& tok, char prefix, const char* what) {
    require(tok.size() >= 2 && tok[0] == prefix,
            std::string("circuit text: bad ") + what + " '" + tok + "'");
    try {
        return std::stoi(tok.substr(1));
    } catch (const std::exception&) {
        throw MechError(std::string("circuit text: bad ") + what + " '" + tok + "'");
    }
}

}  // namespace

Circuit circuit_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int nq = -1, nb = 0;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks[0] == "qubits") {
            require(toks.size() == 2, "circuit text: malformed qubits header");
            nq = std::stoi(toks[1]);
        } else if (toks[0] == "bits") {
            require(toks.size() == 2, "circuit text: malformed bits header");
            nb = std::stoi(toks[1]);
        } else {
            rows.push_back(toks);
        }
    }
    require(nq >= 1, "circuit text: missing qubits header");
    Circuit c(nq, nb);
    for (auto toks : rows) {
        int tag = -1;
        if (!toks.empty() && toks.back().size() > 1 && toks.back()[0] == '@') {
            tag = std::stoi(toks.back().substr(1));
            toks.pop_back();
        }
        const std::string& op = toks[0];
        auto q = [&](size_t i) { return parse_ref(toks.at(i), 'q', "qubit"); };
        if (op == "h" || op == "x" || op == "y" || op == "z") {
            require(toks.size() == 2, "circuit text: malformed 1q gate");
            if (op == "h") c.h(q(1));
            if (op == "x") c.x(q(1));
            if (op == "y") c.y(q(1));
            if (op == "z") c.z(q(1));
        } else if (op == "rz") {
            require(toks.size() == 3, "circuit text: malformed rz");
            c.rz(q(1), std::strtod(toks[2].c_str(), nullptr));
        } else if (op == "cx" || op == "cz" || op == "swap") {
            require(toks.size() == 3, "circuit text: malformed 2q gate");
            if (op == "cx") c.cx(q(1), q(2));
            if (op == "cz") c.cz(q(1), q(2));
            if (op == "swap") c.swap(q(1), q(2));
        } else if (op == "cp") {
            require(toks.size() == 4, "circuit text: malformed cp");
            c.cp(q(1), q(2), std::strtod(toks[3].c_str(), nullptr));
        } else if (op == "bridge") {
            require(toks.size() == 4, "circuit text: malformed bridge");
            c.bridge(q(1), q(2), q(3));
        } else if (op == "measure_z" || op == "measure_x") {
            require(toks.size() == 4 && toks[2] == "->", "circuit text: malformed measure");
            c.measure_into(q(1), op == "measure_z" ? Basis::Z : Basis::X,
                           parse_ref(toks[3], 'c', "bit"));
        } else if (op == "cpauli") {
            require(toks.size() == 5 && toks[3] == "if", "circuit text: malformed cpauli");
            require(toks[1] == "x" || toks[1] == "z", "circuit text: cpauli pauli");
            c.cond_pauli(q(2), toks[1] == "x" ? 'X' : 'Z', parse_ref(toks[4], 'c', "bit"));
        } else {
            throw MechError("circuit text: unknown gate '" + op + "'");
        }
        if (tag >= 0) c.set_last_tag(tag);
    }
    return c;
}

std::string layout_to_json(const HighwayLayout& layout) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["total_nodes"] = layout.total_nodes;
    j["backbone_count"] = layout.backbone_count;
    j["highway_fraction"] = layout.fraction();
    nlohmann::json roles = nlohmann::json::array();
    for (NodeId n = 0; n < layout.total_nodes; ++n) {
        switch (layout.role[n]) {
            case NodeRole::data: roles.push_back("data"); break;
            case NodeRole::backbone: roles.push_back("backbone"); break;
            case NodeRole::interleave_slot: roles.push_back("interleave_slot"); break;
        }
    }
    j["roles"] = roles;
    j["crossroads"] = layout.crossroads;
    j["endpoints"] = layout.endpoints;
    j["segments"] = layout.path_segments;
    return j.dump(2);
}

std::string shuttles_to_json(const std::vector<ShuttleRecord>& shuttles) {
    nlohmann::json j;
    j["schema_version"] = 1;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : shuttles) {
        nlohmann::json js;
        js["index"] = s.index;
        js["start_time"] = s.start_time;
        js["period_end"] = s.period_end;
        js["frozen"] = s.frozen;
        js["frozen_at"] = s.frozen_at;
        nlohmann::json gates = nlohmann::json::array();
        for (const auto& g : s.gates) {
            nlohmann::json jg;
            jg["serial"] = g.serial;
            jg["control"] = g.control;
            jg["targets"] = g.targets;
            jg["control_entrance"] = g.control_entrance;
            jg["path"] = g.path;
            gates.push_back(jg);
        }
        js["gates"] = gates;
        nlohmann::json uses = nlohmann::json::array();
        for (const auto& u : s.entrance_uses)
            uses.push_back({{"entrance", u.entrance},
                            {"time", u.time},
                            {"gate", u.gate_serial},
                            {"qubit", u.qubit}});
        js["entrance_uses"] = uses;
        nlohmann::json occ = nlohmann::json::array();
        for (const auto& [node, gate] : s.occupancy)
            occ.push_back({{"node", node}, {"gate", gate}});
        js["occupancy"] = occ;
        arr.push_back(js);
    }
    j["shuttles"] = arr;
    return j.dump(2);
}

std::string metrics_to_json(const Metrics& m, const std::string& program,
                            const std::string& mode) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["program"] = program;
    j["mode"] = mode;
    j["n_on"] = m.n_on;
    j["n_cross"] = m.n_cross;
    j["n_meas"] = m.n_meas;
    j["depth"] = m.depth;
    j["eff_cnots"] = m.eff_cnots;
    j["highway_fraction"] = m.highway_fraction;
    return j.dump(2);
}

std::string mapping_to_json(const CompiledProgram& prog) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["num_data_qubits"] = prog.num_data_qubits;
    j["num_source_bits"] = prog.num_source_bits;
    j["initial_map"] = prog.initial_map;
    j["final_map"] = prog.final_map;
    j["total_depth"] = prog.total_depth;
    j["highway_fraction"] = prog.highway_fraction;
    return j.dump(2);
}

}  // namespace mech
