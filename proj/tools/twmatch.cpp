#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twmatch/acyclic_cutcount.hpp"
#include "twmatch/cdisc_dp.hpp"
#include "twmatch/graph.hpp"
#include "twmatch/grid.hpp"
#include "twmatch/induced_dp.hpp"
#include "twmatch/nice_decomposition.hpp"
#include "twmatch/oracle.hpp"
#include "twmatch/reduction.hpp"
#include "twmatch/subset_convolution.hpp"
#include "twmatch/tree_decomposition.hpp"

using json = nlohmann::ordered_json;
using namespace twmatch;

namespace {

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    ParseResult res = parse_graph(in);
    if (res.duplicate_edges > 0)
        std::cerr << "warning: dropped " << res.duplicate_edges << " duplicate edge"
                  << (res.duplicate_edges == 1 ? "" : "s") << " from " << path << "\n";
    return std::move(res.graph);
}

TreeDecomposition load_td(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    TdParse res = parse_td(in);
    if (res.declared_n != g.n)
        throw std::runtime_error(path + ": decomposition is for " +
                                 std::to_string(res.declared_n) + " vertices, graph has " +
                                 std::to_string(g.n));
    const std::vector<std::string> bad = validate_td(g, res.td);
    if (!bad.empty()) throw std::runtime_error(path + ": invalid decomposition: " + bad.front());
    return std::move(res.td);
}

void write_pace(std::ostream& out, const Graph& g) {
    out << "p tw " << g.n << ' ' << g.m() << '\n';
    for (auto [u, v] : g.edges) out << u + 1 << ' ' << v + 1 << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

// "(1,1),(2,3);(1,2)" - sets split on ';', elements are "(row,col)" pairs.
std::vector<RowSet> parse_sets_spec(const std::string& spec) {
    std::vector<RowSet> sets;
    RowSet cur;
    std::size_t i = 0;
    const auto skip = [&] {
        while (i < spec.size() && (spec[i] == ' ' || spec[i] == ',')) ++i;
    };
    const auto number = [&] {
        std::size_t start = i;
        while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i]))) ++i;
        if (i == start) throw std::runtime_error("sets: expected a number at position " +
                                                 std::to_string(start));
        return std::stoi(spec.substr(start, i - start));
    };
    const auto expect = [&](char ch) {
        if (i >= spec.size() || spec[i] != ch)
            throw std::runtime_error(std::string("sets: expected '") + ch + "' at position " +
                                     std::to_string(i));
        ++i;
    };
    skip();
    while (i < spec.size()) {
        if (spec[i] == ';') {
            ++i;
            sets.push_back(std::move(cur));
            cur = {};
            skip();
            continue;
        }
        expect('(');
        const int row = number();
        expect(',');
        const int col = number();
        expect(')');
        cur.push_back({row, col});
        skip();
    }
    if (!cur.empty() || !sets.empty()) sets.push_back(std::move(cur));
    return sets;
}

Graph random_graph(std::uint64_t seed, int n, int m) {
    std::vector<std::pair<int, int>> all;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) all.push_back({u, v});
    std::mt19937_64 rng(seed);
    for (std::size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[rng() % i]);
    Graph g(n);
    m = std::min<int>(m, static_cast<int>(all.size()));
    for (int e = 0; e < m; ++e) g.add_edge(all[e].first, all[e].second);
    return g;
}

void notice_threads(int threads) {
    if (threads != 1)
        std::cerr << "notice: this build runs single-threaded; --threads ignored\n";
}

struct SolveArgs {
    std::string problem;
    std::string graph_path, td_path;
    int ell = 0;
    int c = 0;
    bool c_given = false;
    std::uint64_t seed = 1;
    int trials = 7;
    std::string join = "naive";
    bool check_oracle = false;
    int threads = 1;
};

int run_solve(const SolveArgs& a) {
    notice_threads(a.threads);
    const Graph g = load_graph(a.graph_path);
    const TreeDecomposition td =
        a.td_path.empty() ? min_fill_decompose(g) : load_td(a.td_path, g);
    const NiceDecomposition nd = make_nice_deferred(g, td);
    const JoinMode mode = a.join == "conv" ? JoinMode::Convolution : JoinMode::Naive;

    bool yes = false;
    std::int64_t value = -1;
    bool has_value = false;
    const auto t0 = std::chrono::steady_clock::now();
    if (a.problem == "induced") {
        const InducedResult res = solve_induced(g, nd, a.ell, mode);
        yes = res.yes;
        value = res.saturated;
        has_value = true;
    } else if (a.problem == "acyclic") {
        AcyclicOptions opts;
        opts.trials = a.trials;
        opts.seed = a.seed;
        opts.join = mode;
        yes = decide_acyclic(g, nd, a.ell, opts).yes;
    } else if (a.problem == "cdisc") {
        if (!a.c_given) throw std::runtime_error("cdisc needs --c");
        const CdiscResult res = solve_cdisc(g, nd, a.ell, a.c, mode);
        yes = res.yes;
        value = res.saturated;
        has_value = value >= 0;
    } else {
        const int c = a.c_given ? a.c : 2;
        if (c == 1)
            std::cerr << "notice: one component class is plain maximum matching, "
                         "answered by the exhaustive reference\n";
        const CdiscResult res = solve_disconnected(g, nd, a.ell, c, mode);
        yes = res.yes;
        value = res.saturated;
        has_value = value >= 0;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (a.check_oracle) {
        if (g.n > 16) {
            std::cerr << "notice: graph too large for the exhaustive check; skipped\n";
        } else {
            const int cmax = std::max(3, a.c_given ? a.c : 2);
            const OracleReport ref = brute_matching_numbers(g, cmax);
            bool ok = true;
            std::string detail;
            if (a.problem == "induced") {
                ok = value == 2LL * ref.mu_induced;
                detail = "mu_induced " + std::to_string(ref.mu_induced);
            } else if (a.problem == "acyclic") {
                if (yes && ref.mu_acyclic < a.ell) {
                    ok = false;
                    detail = "mu_acyclic " + std::to_string(ref.mu_acyclic);
                } else if (!yes && ref.mu_acyclic >= a.ell) {
                    std::cerr << "notice: randomized no against oracle yes "
                                 "(possible at low trial counts)\n";
                }
            } else {
                const int c = a.c_given ? a.c : 2;
                const int want = ref.mu_discon.at(c);
                ok = (has_value ? value / 2 : -1) == want;
                detail = "mu_discon[" + std::to_string(c) + "] " + std::to_string(want);
            }
            if (!ok) {
                std::cerr << "error: oracle mismatch (" << detail << ")\n";
                return 2;
            }
        }
    }

    json report;
    report["schema_version"] = 1;
    report["problem"] = a.problem;
    report["answer"] = yes ? "yes" : "no";
    report["value"] = has_value ? json(value) : json(nullptr);
    report["width_used"] = td.width();
    report["node_count"] = nd.nodes.size();
    report["wall_time"] = wall;
    report["seed"] = a.seed;
    report["trials"] = a.trials;
    std::cout << report.dump(2) << "\n";
    return yes ? 0 : 1;
}

int run_oracle(const std::string& graph_path, int cmax) {
    const Graph g = load_graph(graph_path);
    const OracleReport rep = brute_matching_numbers(g, cmax);
    json out;
    out["schema_version"] = 1;
    out["mu"] = rep.mu;
    out["mu_induced"] = rep.mu_induced;
    out["mu_acyclic"] = rep.mu_acyclic;
    json discon = json::object();
    for (const auto& [c, v] : rep.mu_discon) discon[std::to_string(c)] = v;
    out["mu_discon"] = discon;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_gen_hitting(int k, const std::string& spec, const std::string& dir) {
    const std::vector<RowSet> sets = parse_sets_spec(spec);
    const ReductionInstance inst = build_reduction(k, sets);
    const std::string base =
        dir + "/hitting_k" + std::to_string(k) + "_m" + std::to_string(inst.m);
    {
        auto out = open_out(base + ".gr");
        write_pace(out, inst.graph);
    }
    {
        auto out = open_out(base + ".td");
        write_td(out, inst.path_decomposition, inst.graph.n);
    }
    json sidecar;
    sidecar["schema_version"] = 1;
    sidecar["k"] = inst.k;
    sidecar["m"] = inst.m;
    sidecar["n"] = inst.graph.n;
    sidecar["ell"] = inst.ell;
    sidecar["c"] = inst.c;
    sidecar["labels"] = inst.labels;
    {
        auto out = open_out(base + ".json");
        out << sidecar.dump(2) << "\n";
    }
    json summary;
    summary["graph"] = base + ".gr";
    summary["decomposition"] = base + ".td";
    summary["sidecar"] = base + ".json";
    summary["n"] = inst.graph.n;
    summary["ell"] = inst.ell;
    summary["c"] = inst.c;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int run_decompose(const std::string& graph_path, const std::string& out_path) {
    const Graph g = load_graph(graph_path);
    const TreeDecomposition td = min_fill_decompose(g);
    if (out_path.empty()) {
        write_td(std::cout, td, g.n);
        return 0;
    }
    auto out = open_out(out_path);
    write_td(out, td, g.n);
    json summary;
    summary["width"] = td.width();
    summary["bags"] = td.bags.size();
    summary["out"] = out_path;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int run_bench(const std::string& config_path, const std::string& csv_path, int threads) {
    notice_threads(threads);
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open " + config_path);
    json config = json::parse(in);
    if (!config.is_object() || !config.contains("instances") ||
        !config["instances"].is_array())
        throw std::runtime_error(config_path + ": expected {\"instances\": [...]}");

    auto csv = open_out(csv_path);
    csv << "instance,join_mode,wall_time,width\n";
    for (const json& spec : config["instances"]) {
        Graph g(0);
        TreeDecomposition td;
        std::string name;
        const std::string kind = spec.value("kind", "grid");
        if (kind == "grid") {
            const int p = spec.at("p").get<int>();
            const int q = spec.at("q").get<int>();
            g = grid_graph(p, q);
            td = grid_decomposition(p, q, spec.value("spurs", true));
            name = "grid_p" + std::to_string(p) + "_q" + std::to_string(q);
        } else if (kind == "random") {
            const int n = spec.at("n").get<int>();
            const int m = spec.at("m").get<int>();
            const std::uint64_t seed = spec.value("seed", 1);
            g = random_graph(seed, n, m);
            td = min_fill_decompose(g);
            name = "random_n" + std::to_string(n) + "_m" + std::to_string(m);
        } else {
            throw std::runtime_error("bench: unknown instance kind '" + kind + "'");
        }
        name = spec.value("name", name);
        const NiceDecomposition nd = make_nice_deferred(g, td);
        const std::string problem = spec.value("problem", "induced");
        const int ell = spec.value("ell", 0);

        std::int64_t answers[2] = {0, 0};
        const char* mode_names[2] = {"naive", "conv"};
        for (int mi = 0; mi < 2; ++mi) {
            const JoinMode mode = mi == 0 ? JoinMode::Naive : JoinMode::Convolution;
            const auto t0 = std::chrono::steady_clock::now();
            if (problem == "induced") {
                answers[mi] = solve_induced(g, nd, ell, mode).saturated;
            } else if (problem == "acyclic") {
                AcyclicOptions opts;
                opts.trials = spec.value("trials", 7);
                opts.seed = spec.value("seed", 1);
                opts.join = mode;
                answers[mi] = decide_acyclic(g, nd, ell, opts).yes ? 1 : 0;
            } else if (problem == "cdisc") {
                answers[mi] = solve_cdisc(g, nd, ell, spec.at("c").get<int>(), mode).saturated;
            } else {
                throw std::runtime_error("bench: unknown problem '" + problem + "'");
            }
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            csv << name << ',' << mode_names[mi] << ',' << wall << ',' << td.width() << "\n";
        }
        if (answers[0] != answers[1])
            throw std::runtime_error("bench: join modes disagree on " + name +
                                     " (correctness bug)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matching variants (induced, acyclic, component-threshold) solved over "
                 "tree decompositions, with exhaustive references and generators"};
    app.require_subcommand(1);

    SolveArgs sa;
    CLI::App* solve = app.add_subcommand("solve", "Decide a matching problem on a graph");
    solve->add_option("--problem", sa.problem, "induced | acyclic | cdisc | disc")
        ->required()
        ->check(CLI::IsMember({"induced", "acyclic", "cdisc", "disc"}));
    solve->add_option("--ell", sa.ell, "Matching size to reach")
        ->required()
        ->check(CLI::NonNegativeNumber);
    CLI::Option* copt = solve->add_option("--c", sa.c, "Component threshold (cdisc, disc)")
                            ->check(CLI::PositiveNumber);
    solve->add_option("--graph", sa.graph_path, "Graph file (edge list or .gr)")->required();
    solve->add_option("--td", sa.td_path, "Decomposition file (.td); default: min-fill");
    solve->add_option("--seed", sa.seed, "Random seed (acyclic)");
    solve->add_option("--trials", sa.trials, "Trial count (acyclic)")
        ->check(CLI::PositiveNumber);
    solve->add_option("--join", sa.join, "Join strategy at join nodes")
        ->check(CLI::IsMember({"naive", "conv"}));
    solve->add_flag("--check-oracle", sa.check_oracle,
                    "Cross-check small graphs against the exhaustive reference");
    solve->add_option("--threads", sa.threads, "Worker threads (this build: 1)");

    std::string oracle_graph;
    int oracle_cmax = 3;
    CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive reference numbers (n <= 16)");
    oracle->add_option("--graph", oracle_graph, "Graph file")->required();
    oracle->add_option("--cmax", oracle_cmax, "Largest component threshold to report")
        ->check(CLI::PositiveNumber);

    int gen_k = 0;
    std::string gen_sets, gen_dir = ".";
    CLI::App* gen = app.add_subcommand("gen", "Instance generators");
    gen->require_subcommand(1);
    CLI::App* gen_hit = gen->add_subcommand(
        "hitting-set", "Row-constrained hitting set as a disconnected-matching instance");
    gen_hit->add_option("--k", gen_k, "Rows (and columns) of the selection grid")->required();
    gen_hit->add_option("--sets", gen_sets, "Family, e.g. \"(1,1),(2,2);(1,2)\"");
    gen_hit->add_option("--out", gen_dir, "Output directory");

    std::string dec_graph, dec_out;
    CLI::App* dec = app.add_subcommand("decompose", "Min-fill tree decomposition");
    dec->add_option("--graph", dec_graph, "Graph file")->required();
    dec->add_option("--out", dec_out, "Write .td here instead of standard output");

    std::string bench_config, bench_out;
    int bench_threads = 1;
    CLI::App* bench = app.add_subcommand("bench", "Compare join strategies on a suite");
    bench->add_option("--config", bench_config, "JSON suite description")->required();
    bench->add_option("--out", bench_out, "CSV output path")->required();
    bench->add_option("--threads", bench_threads, "Worker threads (this build: 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            sa.c_given = copt->count() > 0;
            return run_solve(sa);
        }
        if (oracle->parsed()) return run_oracle(oracle_graph, oracle_cmax);
        if (gen->parsed()) return run_gen_hitting(gen_k, gen_sets, gen_dir);
        if (dec->parsed()) return run_decompose(dec_graph, dec_out);
        if (bench->parsed()) return run_bench(bench_config, bench_out, bench_threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
