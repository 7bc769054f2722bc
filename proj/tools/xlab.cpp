#include "xlab/density.hpp"
#include "xlab/errors.hpp"
#include "xlab/experiments.hpp"
#include "xlab/seqmeasure.hpp"
#include "xlab/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;
using namespace xlab;

constexpr int kExitAssertion = 1;
constexpr int kExitError = 2;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << content;
}

std::string value_string(double x) { return format_double(x); }
std::string value_string(const Rational& x) { return to_string(x); }

int cmd_density(const std::string& graph_path, const std::string& space_path, bool normalized, bool bigraph,
                bool as_json) {
    const Graph g = bigraph ? load_bigraph(graph_path).underlying() : load_graph(graph_path);
    const AnySpace space = load_space(space_path);
    DensityOptions opts;
    opts.normalized = normalized;
    std::visit(
        [&](const auto& s) {
            const auto r = density_detailed(g, s, opts);
            using T = std::decay_t<decltype(r.value)>;
            const std::string mode = std::is_same_v<T, Rational> ? "rational" : "f64";
            if (as_json) {
                json out = {{"width", r.width}, {"mode", mode}};
                if constexpr (std::is_same_v<T, Rational>) {
                    out["t"] = to_string(r.value);
                    out["t_float"] = r.value.get_d();
                } else {
                    out["t"] = r.value;
                }
                std::cout << out.dump() << "\n";
            } else {
                std::cout << value_string(r.value) << "\n";
            }
        },
        space);
    return 0;
}

std::string order_string(const std::vector<int>& order) {
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i)
        out += (i ? " " : "") + std::to_string(order[i]);
    return out;
}

int cmd_seq(const std::string& graph_path, const std::string& space_path, int orders, std::uint64_t seed,
            const std::string& report_path) {
    const Graph g = load_graph(graph_path);
    const AnySpace space = load_space(space_path);
    const OrderReport rep =
        std::visit([&](const auto& s) { return order_independence_report(g, s, orders, seed); }, space);
    std::cout << "orders_tested " << rep.orders_tested << "\n"
              << "max_deviation " << value_string(rep.max_deviation) << "\n"
              << "max_deviation_vs_hom " << value_string(rep.max_deviation_vs_hom) << "\n";
    if (!report_path.empty()) {
        std::string csv = "order_index,order,total_mass,deviation,deviation_vs_hom,null_tuples\n";
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
            const auto& r = rep.rows[i];
            csv += std::to_string(i) + "," + order_string(r.order) + "," + value_string(r.total_mass) + "," +
                   value_string(r.deviation) + "," + value_string(r.deviation_vs_hom) + "," +
                   std::to_string(r.null_tuples) + "\n";
        }
        write_file(report_path, csv);
    }
    return 0;
}

int cmd_sphere(int d, long samples, std::uint64_t seed, const std::string& out) {
    const auto r = k22_order_experiment(d, samples, seed);
    write_file(out, k22_csv(r));
    std::cout << "ks_vs_uniform " << value_string(r.ks_vs_uniform) << "\n"
              << "mass_at_one " << value_string(r.mass_at_one) << "\n"
              << "degenerate " << r.degenerate << "\n";
    return 0;
}

int cmd_spectrum(const std::string& space_path, bool as_json) {
    const AnySpace space = load_space(space_path);
    const Spectrum sp = std::visit([](const auto& s) { return spectrum(s); }, space);
    if (as_json) {
        std::cout << json{{"eigenvalues", sp.values}, {"residual", sp.residual}}.dump() << "\n";
    } else {
        for (double v : sp.values)
            std::cout << value_string(v) << "\n";
    }
    return 0;
}

std::vector<int> parse_powers(const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            const int p = std::stoi(item, &used);
            if (used != item.size() || p < 1)
                throw std::invalid_argument(item);
            out.push_back(p);
        } catch (const std::logic_error&) {
            throw ValidationError("--powers expects a comma separated list of positive integers, got '" + text + "'");
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

int cmd_convolution(int k_max, const std::string& powers, const std::string& out) {
    const auto rep = convolution_report(k_max, parse_powers(powers));
    std::string csv = "k,lambda,lower_bound,ratio\n";
    auto cell = [](double x) { return std::isnan(x) ? std::string("nan") : value_string(x); };
    for (const auto& r : rep.rows)
        csv += std::to_string(r.k) + "," + cell(r.lambda) + "," + cell(r.lower_bound) + "," + cell(r.ratio) + "\n";
    write_file(out, csv);
    for (const auto& ps : rep.partial_sums) {
        if (ps.sums.empty())
            continue;
        std::cout << "power " << ps.power << ":";
        for (std::size_t j = 0; j < ps.sums.size(); ++j)
            std::cout << " K=" << ps.checkpoints[j] << " " << value_string(ps.sums[j]);
        if (ps.sums.size() > 1)
            std::cout << (ps.strictly_increasing ? " (increasing)" : " (plateau)");
        std::cout << "\n";
    }
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out, bool force, bool oracle) {
    const auto cfg = load_config(config_path);
    const auto path = default_expectations_path();
    Expectations ex = Expectations::load(path);
    RunOptions opts;
    opts.oracle = oracle;
    const auto result = run_experiment(cfg, ex, opts);
    write_result(result, cfg, out, force);
    if (oracle)
        ex.save(path);
    int failed = 0;
    for (const auto& a : result.assertions) {
        std::printf("%s %s measured=%s expected=%s tol=%s [%s]\n", a.pass ? "PASS" : "FAIL", a.name.c_str(),
                    (a.measured_exact.empty() ? value_string(a.measured) : a.measured_exact).c_str(),
                    (a.expected_exact.empty() ? value_string(a.expected) : a.expected_exact).c_str(),
                    value_string(a.tol).c_str(), a.provenance.c_str());
        failed += a.pass ? 0 : 1;
    }
    std::printf("%zu assertions, %d failed\n", result.assertions.size(), failed);
    return failed ? kExitAssertion : 0;
}

int cmd_list() {
    for (const auto& e : list_experiments())
        std::printf("%-22s %s\n", e.name.c_str(), e.description.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Densities of graph patterns in Markov spaces"};
    app.require_subcommand(1);

    std::string graph, space, out, report, powers = "2,4,8", config;
    bool normalized = false, bigraph = false, as_json = false, force = false, oracle = false;
    int orders = 8, d = 3, k_max = 4096;
    long samples = 10000;
    std::uint64_t seed = 0;

    auto* dens = app.add_subcommand("density", "Homomorphism density t(G, s)");
    dens->add_option("--graph", graph, "Edge list (or Bigraph JSON with --bigraph)")->required();
    dens->add_option("--space", space, "Space JSON")->required();
    dens->add_flag("--normalized", normalized, "Divide by t(K_2)^|E|");
    dens->add_flag("--bigraph", bigraph, "Read --graph as Bigraph JSON");
    dens->add_flag("--json", as_json, "Emit a JSON object");

    auto* seq = app.add_subcommand("seq", "Order independence of the sequential star measure");
    seq->add_option("--graph", graph, "Edge list of a triangle-free pattern")->required();
    seq->add_option("--space", space, "Space JSON")->required();
    seq->add_option("--orders", orders, "Random orders besides identity and reverse")->check(CLI::Range(0, 100000));
    seq->add_option("--seed", seed, "Seed");
    seq->add_option("--report", report, "Per-order CSV");

    auto* sphere = app.add_subcommand("sphere-k22", "Sequential K_{2,2} maps into the sphere space");
    sphere->add_option("--d", d, "Ambient dimension (only 3)");
    sphere->add_option("--samples", samples, "Samples per order")->check(CLI::PositiveNumber);
    sphere->add_option("--seed", seed, "Seed");
    sphere->add_option("--out", out, "Sample CSV")->required();

    auto* spec = app.add_subcommand("spectrum", "Eigenvalues of the Markov operator, descending");
    spec->add_option("--space", space, "Space JSON")->required();
    spec->add_flag("--json", as_json, "Emit a JSON object");

    auto* conv = app.add_subcommand("convolution", "Eigenvalues of the convolution-log graphon");
    conv->add_option("--kmax", k_max, "Largest frequency")->check(CLI::Range(0, 4096));
    conv->add_option("--powers", powers, "Comma separated powers for partial sums");
    conv->add_option("--out", out, "Eigenvalue CSV")->required();

    auto* run = app.add_subcommand("run", "Run a configured experiment");
    run->add_option("config", config, "Config JSON")->required();
    run->add_option("--out", out, "Output directory")->required();
    run->add_flag("--force", force, "Allow a nonempty output directory");
    run->add_flag("--oracle", oracle, "Recompute expected values and rewrite the expectations file");

    auto* list = app.add_subcommand("list", "List registered experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (dens->parsed())
            return cmd_density(graph, space, normalized, bigraph, as_json);
        if (seq->parsed())
            return cmd_seq(graph, space, orders, seed, report);
        if (sphere->parsed())
            return cmd_sphere(d, samples, seed, out);
        if (spec->parsed())
            return cmd_spectrum(space, as_json);
        if (conv->parsed())
            return cmd_convolution(k_max, powers, out);
        if (run->parsed())
            return cmd_run(config, out, force, oracle);
        if (list->parsed())
            return cmd_list();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
