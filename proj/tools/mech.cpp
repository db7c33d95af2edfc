// Command-line front end: compile circuits onto chiplet arrays, sweep
// architecture parameters, and verify compiled artifacts.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mech/bench_circuits.hpp"
#include "mech/config.hpp"
#include "mech/entangle.hpp"
#include "mech/metrics.hpp"
#include "mech/serialize.hpp"
#include "mech/sim.hpp"

namespace fs = std::filesystem;
using namespace mech;

namespace {

struct BenchSpec {
    std::string family;
    int size = 0;
};

BenchSpec parse_bench(const std::string& name) {
    const auto dash = name.rfind('-');
    require(dash != std::string::npos, "bench name must look like qft-261");
    BenchSpec b;
    b.family = name.substr(0, dash);
    try {
        b.size = std::stoi(name.substr(dash + 1));
    } catch (const std::exception&) {
        throw MechError("bench name must end in a qubit count: " + name);
    }
    require(b.family == "qft" || b.family == "qaoa" || b.family == "vqe" ||
                b.family == "bv",
            "unknown benchmark family '" + b.family + "'");
    require(b.size >= 2, "benchmark size must be >= 2");
    return b;
}

Circuit make_bench(const BenchSpec& b, uint64_t seed, int vqe_layers = 1) {
    if (b.family == "qft") return gen_qft(b.size);
    if (b.family == "qaoa") return gen_qaoa(b.size, seed);
    if (b.family == "vqe") return gen_vqe(b.size, vqe_layers, seed);
    return gen_bv(b.size, seed);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path);
    require(f.good(), "cannot write " + path.string());
    f << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path);
    require(f.good(), "cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct CompileResult {
    CompiledProgram prog;
    Metrics metrics;
};

CompileResult run_compile(const Circuit& circ, const RunConfig& cfg, bool highway) {
    const CouplingGraph graph = build_chiplet_array(cfg.chip);
    CompileResult out;
    if (highway) {
        const HighwayLayout layout = allocate_highway(graph, cfg.highway);
        out.prog = compile(circ, graph, layout, cfg.scheduler(true));
    } else {
        out.prog = baseline_compile(circ, graph, cfg.scheduler(false));
    }
    out.metrics = count_ops(out.prog, graph, cfg.error_model);
    return out;
}

int cmd_compile(const std::string& config_path, const std::string& circuit_path,
                const std::string& bench_name, const std::string& out_dir,
                bool no_highway, int vqe_layers) {
    const RunConfig cfg = load_config_file(config_path);
    Circuit circ(1);
    std::string program_name;
    if (!bench_name.empty()) {
        const BenchSpec b = parse_bench(bench_name);
        circ = make_bench(b, cfg.seed, vqe_layers);
        program_name = bench_name;
    } else {
        require(!circuit_path.empty(), "need --circuit or --bench");
        circ = circuit_from_text(read_file(circuit_path));
        program_name = fs::path(circuit_path).stem().string();
    }

    const auto result = run_compile(circ, cfg, !no_highway);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_file(dir / "source.circ", circuit_to_text(circ));
    write_file(dir / "compiled.circ", circuit_to_text(result.prog.physical));
    write_file(dir / "mapping.json", mapping_to_json(result.prog));
    write_file(dir / "shuttles.json", shuttles_to_json(result.prog.shuttles));
    write_file(dir / "metrics.json",
               metrics_to_json(result.metrics, program_name,
                               no_highway ? "baseline" : "mech"));
    write_file(dir / "config.txt", config_to_text(cfg));
    if (!no_highway) {
        const CouplingGraph graph = build_chiplet_array(cfg.chip);
        write_file(dir / "layout.json",
                   layout_to_json(allocate_highway(graph, cfg.highway)));
    }
    std::cout << "program " << program_name << ": depth " << result.metrics.depth
              << ", eff_cnots " << result.metrics.eff_cnots << ", shuttles "
              << result.prog.shuttles.size() << "\n";
    std::cout << "artifacts written to " << out_dir << "\n";
    return 0;
}

struct SweepPoint {
    std::string label;
    RunConfig cfg;
};

std::vector<SweepPoint> sweep_points(const std::string& axis, const RunConfig& base,
                                     const std::vector<std::string>& range) {
    std::vector<SweepPoint> pts;
    auto add = [&](const std::string& label, RunConfig cfg) {
        pts.push_back({label, std::move(cfg)});
    };
    if (axis == "chiplet_count") {
        std::vector<std::pair<int, int>> arrays{{2, 2}, {2, 3}, {3, 3}, {3, 4}};
        for (const auto& [r, c] : arrays) {
            RunConfig cfg = base;
            cfg.chip.array_rows = r;
            cfg.chip.array_cols = c;
            add(std::to_string(r) + "x" + std::to_string(c), cfg);
        }
    } else if (axis == "sparsity") {
        std::vector<double> keeps{1.0, 3.0 / 7.0, 1.0 / 7.0};
        std::vector<std::string> labels{"7/7", "3/7", "1/7"};
        for (size_t i = 0; i < keeps.size(); ++i) {
            RunConfig cfg = base;
            cfg.chip.cross_sparsity = keeps[i];
            add(labels[i], cfg);
        }
    } else if (axis == "meas_depth") {
        for (int d = 1; d <= 20; ++d) {
            RunConfig cfg = base;
            cfg.error_model.meas_depth = d;
            add(std::to_string(d), cfg);
        }
    } else if (axis == "ratio_meas") {
        for (double r : {1.0, 2.2, 3.0, 4.0, 5.0, 6.0, 8.0}) {
            RunConfig cfg = base;
            cfg.error_model.ratio_meas = r;
            add(std::to_string(r), cfg);
        }
    } else if (axis == "ratio_cross") {
        for (double r : {1.0, 2.0, 4.0, 7.4, 10.0, 15.0}) {
            RunConfig cfg = base;
            cfg.error_model.ratio_cross = r;
            add(std::to_string(r), cfg);
        }
    } else if (axis == "highway_pct") {
        for (int m = 1; m <= 3; ++m) {
            RunConfig cfg = base;
            cfg.highway.density_multiplier = m;
            add("x" + std::to_string(m), cfg);
        }
    } else if (axis == "structure") {
        for (auto s : {Structure::square, Structure::hexagon, Structure::heavy_square,
                       Structure::heavy_hexagon}) {
            RunConfig cfg = base;
            cfg.chip.structure = s;
            if ((s == Structure::heavy_square || s == Structure::heavy_hexagon) &&
                (cfg.chip.chiplet_rows % 2 || cfg.chip.chiplet_cols % 2)) {
                cfg.chip.chiplet_rows += cfg.chip.chiplet_rows % 2;
                cfg.chip.chiplet_cols += cfg.chip.chiplet_cols % 2;
            }
            add(to_string(s), cfg);
        }
    } else {
        throw MechError("unknown sweep axis '" + axis + "'");
    }
    if (!range.empty()) {
        std::vector<SweepPoint> filtered;
        for (const auto& want : range)
            for (const auto& p : pts)
                if (p.label == want) filtered.push_back(p);
        require(!filtered.empty(), "sweep range matched no points");
        pts = filtered;
    }
    return pts;
}

int cmd_sweep(const std::string& axis, const std::string& config_path,
              const std::string& bench_name, const std::string& out_csv,
              const std::vector<std::string>& range) {
    const RunConfig base = load_config_file(config_path);
    const auto pts = sweep_points(axis, base, range);

    int workers = 1;
    if (const char* env = std::getenv("MECH_WORKERS")) workers = std::max(1, std::atoi(env));
    workers = std::min<int>(workers, static_cast<int>(pts.size()));

    struct Row {
        std::string label;
        int data_qubits = 0;
        Metrics mech, base;
        std::string error;
    };
    std::vector<Row> rows(pts.size());
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= pts.size()) return;
            Row& row = rows[i];
            row.label = pts[i].label;
            try {
                const RunConfig& cfg = pts[i].cfg;
                const CouplingGraph graph = build_chiplet_array(cfg.chip);
                const HighwayLayout layout = allocate_highway(graph, cfg.highway);
                const int data = graph.num_nodes() - layout.backbone_count;
                BenchSpec b = parse_bench(bench_name);
                b.size = b.size > 0 && bench_name.back() == '*' ? data : b.size;
                const Circuit circ = make_bench(b, cfg.seed);
                row.data_qubits = b.size;
                const auto mech_run = run_compile(circ, cfg, true);
                const auto base_run = run_compile(circ, cfg, false);
                row.mech = mech_run.metrics;
                row.base = base_run.metrics;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "schema_version,axis,point,data_qubits,mech_depth,mech_eff_cnots,"
           "base_depth,base_eff_cnots,depth_improvement,eff_improvement\n";
    bool failed = false;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            std::cerr << "point " << row.label << " failed: " << row.error << "\n";
            failed = true;
            continue;
        }
        const double di = 1.0 - row.mech.depth / row.base.depth;
        const double ei = 1.0 - row.mech.eff_cnots / row.base.eff_cnots;
        csv << 1 << ',' << axis << ',' << row.label << ',' << row.data_qubits << ','
            << row.mech.depth << ',' << row.mech.eff_cnots << ',' << row.base.depth
            << ',' << row.base.eff_cnots << ',' << di << ',' << ei << "\n";
    }
    if (out_csv.empty())
        std::cout << csv.str();
    else
        write_file(out_csv, csv.str());
    return failed ? 1 : 0;
}

int cmd_verify(const std::string& dir, int trials, uint64_t seed) {
    const fs::path d(dir);
    const Circuit original = circuit_from_text(read_file(d / "source.circ"));
    CompiledProgram prog;
    prog.physical = circuit_from_text(read_file(d / "compiled.circ"));
    const auto mapping = nlohmann::json::parse(read_file(d / "mapping.json"));
    prog.num_data_qubits = mapping.at("num_data_qubits").get<int>();
    prog.num_source_bits = mapping.at("num_source_bits").get<int>();
    prog.initial_map = mapping.at("initial_map").get<std::vector<NodeId>>();
    prog.final_map = mapping.at("final_map").get<std::vector<NodeId>>();

    const EquivReport rep = check_equivalence(original, prog, trials, seed);
    nlohmann::json j;
    j["schema_version"] = 1;
    j["mode"] = rep.mode;
    j["trials"] = rep.trials;
    j["min_fidelity"] = rep.min_fidelity;
    j["detail"] = rep.detail;
    switch (rep.status) {
        case EquivReport::Status::pass: j["status"] = "pass"; break;
        case EquivReport::Status::fail: j["status"] = "fail"; break;
        case EquivReport::Status::unverifiable: j["status"] = "unverifiable"; break;
    }
    std::cout << j.dump(2) << "\n";
    write_file(d / "verify.json", j.dump(2));
    if (rep.status == EquivReport::Status::fail) return 2;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MECH chiplet compiler"};
    app.require_subcommand(1);

    std::string config_path, circuit_path, bench_name, out_dir = "out";
    bool no_highway = false;
    int vqe_layers = 1;
    auto* compile_cmd = app.add_subcommand("compile", "compile a circuit or benchmark");
    compile_cmd->add_option("--config", config_path, "config file")->required();
    compile_cmd->add_option("--circuit", circuit_path, "circuit text file");
    compile_cmd->add_option("--bench", bench_name, "benchmark, e.g. qft-261");
    compile_cmd->add_option("--out", out_dir, "artifact directory");
    compile_cmd->add_option("--vqe-layers", vqe_layers, "ansatz layers for vqe");
    compile_cmd->add_flag("--no-highway", no_highway, "baseline: SWAP routing only");

    std::string axis, sweep_config, sweep_bench, out_csv;
    std::vector<std::string> range;
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one architecture axis");
    sweep_cmd
        ->add_option("--axis", axis,
                     "chiplet_count|sparsity|meas_depth|ratio_meas|ratio_cross|"
                     "highway_pct|structure")
        ->required();
    sweep_cmd->add_option("--config", sweep_config, "base config file")->required();
    sweep_cmd->add_option("--bench", sweep_bench, "benchmark, e.g. qaoa-160")->required();
    sweep_cmd->add_option("--out", out_csv, "CSV output path (stdout if omitted)");
    sweep_cmd->add_option("--points", range, "subset of points to run");

    std::string verify_dir;
    int trials = 20;
    uint64_t verify_seed = 7;
    auto* verify_cmd = app.add_subcommand("verify", "check compiled artifacts");
    verify_cmd->add_option("--dir", verify_dir, "artifact directory")->required();
    verify_cmd->add_option("--trials", trials, "equivalence trials");
    verify_cmd->add_option("--seed", verify_seed, "trial seed");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*compile_cmd)
            return cmd_compile(config_path, circuit_path, bench_name, out_dir,
                               no_highway, vqe_layers);
        if (*sweep_cmd) return cmd_sweep(axis, sweep_config, sweep_bench, out_csv, range);
        if (*verify_cmd) return cmd_verify(verify_dir, trials, verify_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
