// qrobust.cpp — command-line front end: gain, mu, detuning, table1, verify

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "qrobust/sweeps.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitVerify = 3;

struct Options {
    std::string model;
    std::string structures;
    double delta = 0.1;
    double delta_max = 5.0;
    std::string axis = "freq";
    std::string grid;
    std::string variant = "dynamic";
    std::string out;
    std::string format = "csv";
    double tol_rank = 1e-9;
    bool allow_pole = false;
    int threads = 0;
    double alpha = 1.0;
    double gamma = 1.0;
    std::string param = "Delta";
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void emit(const qrobust::ResultTable& t, const Options& o) {
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw qrobust::ValidationError("cannot open output file '" + o.out + "'");
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    if (o.format == "csv") qrobust::write_csv(os, t);
    else if (o.format == "json") qrobust::write_json(os, t);
    else throw qrobust::ValidationError("unknown format '" + o.format + "' (expected csv|json)");
}

qrobust::SweepSpec make_spec(const Options& o, const std::string& default_grid) {
    qrobust::SweepSpec spec;
    spec.axis = qrobust::parse_axis(o.axis);
    spec.grid = qrobust::Grid::parse(o.grid.empty() ? default_grid : o.grid);
    spec.structures = split_list(o.structures);
    spec.delta = o.delta;
    spec.delta_max = o.delta_max;
    spec.variant = qrobust::parse_variant(o.variant);
    spec.allow_pole = o.allow_pole;
    spec.threads = o.threads;
    spec.alpha = o.alpha;
    spec.gamma = o.gamma;
    spec.sensitivity_param = qrobust::parse_cavity_param(o.param);
    return spec;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "Output file (default: stdout)");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

void add_sweep(CLI::App* cmd, Options& o, const std::string& default_model) {
    o.model = default_model;
    cmd->add_option("--model", o.model, "Model file or built-in (cavity:gain, cavity:mu, dephasing)");
    cmd->add_option("--structures", o.structures, "Comma-separated structure ids (default: all)");
    cmd->add_option("--axis", o.axis, "freq (s = i omega) or real (s = sigma)");
    cmd->add_option("--grid", o.grid, "min,max,points,lin|log");
    cmd->add_option("--variant", o.variant, "dynamic or prep");
    cmd->add_flag("--allow-pole", o.allow_pole, "Report singular points as flagged rows");
    add_common(cmd, o);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust performance analysis of open quantum systems in Bloch form"};
    app.require_subcommand(1);
    Options o;

    auto* gain = app.add_subcommand("gain", "Transfer gain ||T(s, delta S)|| over a grid");
    add_sweep(gain, o, "cavity:gain");
    gain->add_option("--delta", o.delta, "Perturbation strength");

    auto* mu = app.add_subcommand("mu", "Structured singular value bounds over a grid");
    add_sweep(mu, o, "cavity:mu");
    mu->add_option("--delta", o.delta_max, "Half-width of the real search range is 2x this value");

    auto* det = app.add_subcommand("detuning", "Stability margin and concurrence versus detuning");
    det->add_option("--grid", o.grid, "min,max,points,lin|log");
    det->add_option("--alpha", o.alpha, "Drive amplitude");
    det->add_option("--gamma", o.gamma, "Decay amplitude");
    det->add_option("--param", o.param, "Log-sensitivity parameter: alpha, Delta or gamma");
    add_common(det, o);

    auto* t1 = app.add_subcommand("table1", "Real finite generalized eigenvalues of (A, -S_k)");
    add_common(t1, o);

    auto* ver = app.add_subcommand("verify", "Run regression checks; exit 3 on failure");
    ver->add_option("--tol-rank", o.tol_rank, "Relative rank tolerance");
    ver->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (gain->parsed()) {
            const auto model = qrobust::load_model(o.model);
            emit(qrobust::run_gain_sweep(model, make_spec(o, "1e-2,1e2,81,log")), o);
        } else if (mu->parsed()) {
            const auto model = qrobust::load_model(o.model);
            const std::string grid = o.axis == "real" ? "1e-4,1e1,31,log" : "1e-2,1e2,31,log";
            emit(qrobust::run_mu_sweep(model, make_spec(o, grid)), o);
        } else if (det->parsed()) {
            o.axis = "detuning";
            emit(qrobust::run_detuning_sweep(make_spec(o, "0,3,31,lin")), o);
        } else if (t1->parsed()) {
            emit(qrobust::run_table1(), o);
        } else if (ver->parsed()) {
            bool ok = true;
            for (const auto& c : qrobust::verify(o.tol_rank, o.threads)) {
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " [" << c.detail << "]\n";
                ok = ok && c.pass;
            }
            return ok ? 0 : kExitVerify;
        }
    } catch (const qrobust::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
