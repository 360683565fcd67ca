// sweeps.cpp — grid sweeps over the model, table output and built-in regression checks

#include "qrobust/sweeps.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qrobust {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::vector<std::string> selected_structures(const LoadedModel& model, const SweepSpec& spec) {
    const std::vector<std::string> all = model.structure_ids();
    if (spec.structures.empty()) return all;
    for (const auto& id : spec.structures)
        if (std::find(all.begin(), all.end(), id) == all.end())
            throw ValidationError("model '" + model.name + "' has no structure '" + id + "'");
    return spec.structures;
}

std::string axis_column(Axis a) { return a == Axis::freq ? "omega" : "sigma"; }

cplx axis_point(Axis a, double v) { return a == Axis::freq ? cplx(0.0, v) : cplx(v, 0.0); }

double pinv_norm(const MatrixXc& M) {
    Eigen::JacobiSVD<MatrixXc> svd(M);
    const auto& sv = svd.singularValues();
    for (int i = static_cast<int>(sv.size()) - 1; i >= 0; --i)
        if (sv(i) > 1e-9 * sv(0)) return 1.0 / sv(i);
    return 0.0;
}

std::string describe(const std::vector<GeneralizedEigenvalue>& v) {
    if (v.empty()) return "none";
    std::string out;
    for (const auto& e : v) {
        if (!out.empty()) out += "; ";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", e.value);
        out += buf;
        if (e.multiplicity > 1) out += " (x" + std::to_string(e.multiplicity) + ")";
    }
    return out;
}

} // namespace

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw Error("ResultTable: row width does not match header");
    rows.push_back(std::move(row));
}

size_t ResultTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Error("ResultTable: no column '" + name + "'");
    return static_cast<size_t>(it - columns.begin());
}

double ResultTable::number(size_t row, const std::string& name) const {
    const Cell& c = rows.at(row).at(column(name));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
    throw Error("ResultTable: column '" + name + "' is not numeric");
}

const std::string& ResultTable::text(size_t row, const std::string& name) const {
    return std::get<std::string>(rows.at(row).at(column(name)));
}

bool ResultTable::flag(size_t row, const std::string& name) const {
    return std::get<bool>(rows.at(row).at(column(name)));
}

void write_csv(std::ostream& os, const ResultTable& t) {
    for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) os << format_double(v);
                    else if constexpr (std::is_same_v<T, long long>) os << v;
                    else if constexpr (std::is_same_v<T, bool>) os << (v ? "true" : "false");
                    else os << csv_escape(v);
                },
                row[i]);
        }
        os << "\n";
    }
}

void write_json(std::ostream& os, const ResultTable& t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json rec = nlohmann::ordered_json::object();
        for (size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) rec[t.columns[i]] = std::stod(format_double(v));
                        else rec[t.columns[i]] = nullptr;
                    } else {
                        rec[t.columns[i]] = v;
                    }
                },
                row[i]);
        }
        arr.push_back(std::move(rec));
    }
    os << arr.dump(2) << "\n";
}

Axis parse_axis(const std::string& s) {
    if (s == "freq" || s == "frequency") return Axis::freq;
    if (s == "real" || s == "real_s") return Axis::real;
    if (s == "detuning") return Axis::detuning;
    throw ValidationError("unknown axis '" + s + "' (expected freq|real)");
}

Grid Grid::parse(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() != 4) throw ValidationError("grid must be min,max,points,lin|log: '" + s + "'");
    Grid g;
    try {
        g.min = std::stod(parts[0]);
        g.max = std::stod(parts[1]);
        g.points = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw ValidationError("grid has non-numeric fields: '" + s + "'");
    }
    if (parts[3] == "log") g.log = true;
    else if (parts[3] == "lin") g.log = false;
    else throw ValidationError("grid spacing must be lin or log: '" + parts[3] + "'");
    g.validate();
    return g;
}

void Grid::validate() const {
    if (points < 2) throw ValidationError("grid needs at least 2 points");
    if (!(min < max)) throw ValidationError("grid requires min < max");
    if (log && !(min > 0.0)) throw ValidationError("log grid requires min > 0");
}

std::vector<double> Grid::values() const {
    validate();
    std::vector<double> v(points);
    const double a = log ? std::log10(min) : min;
    const double b = log ? std::log10(max) : max;
    for (int i = 0; i < points; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / (points - 1);
        v[i] = log ? std::pow(10.0, x) : x;
    }
    v.front() = min;
    v.back() = max;
    return v;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, n);
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

ResultTable run_gain_sweep(const LoadedModel& model, const SweepSpec& spec) {
    if (spec.axis == Axis::detuning) throw ValidationError("gain sweep needs axis freq or real");
    const BlochModel bm = model.bloch();
    const auto ids = selected_structures(model, spec);
    const auto grid = spec.grid.values();
    const int ns = static_cast<int>(ids.size());
    const int total = static_cast<int>(grid.size()) * ns;

    std::vector<std::vector<Cell>> rows(total);
    parallel_for(total, spec.threads, [&](int idx) {
        const int i = idx / ns;
        const std::string& id = ids[idx % ns];
        const cplx s = axis_point(spec.axis, grid[i]);
        const MatrixXc P = phi(s, bm.A);
        double sharp_norm = kNaN;
        try {
            sharp_norm = spectral_norm(sharp_inverse(P));
        } catch (const SharpSingularError&) {
        }
        const TransferSample ts =
            transfer(spec.variant, s, spec.delta, bm.A, bm.structure(id), spec.allow_pole);
        rows[idx] = {grid[i], id, spec.delta, to_string(spec.variant), ts.pole ? kNaN : ts.norm,
                     sharp_norm, pinv_norm(P), ts.pole};
    });
    ResultTable t;
    t.columns = {axis_column(spec.axis), "structure", "delta", "variant", "gain",
                 "phi_sharp_norm", "phi_pinv_norm", "pole"};
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

ResultTable run_mu_sweep(const LoadedModel& model, const SweepSpec& spec) {
    if (spec.axis == Axis::detuning) throw ValidationError("mu sweep needs axis freq or real");
    const BlochModel bm = model.bloch();
    const auto ids = selected_structures(model, spec);
    const auto grid = spec.grid.values();
    const int ns = static_cast<int>(ids.size());
    const int total = static_cast<int>(grid.size()) * ns;
    MuOptions opts;
    opts.delta_max = spec.delta_max;

    std::vector<std::vector<Cell>> rows(total);
    parallel_for(total, spec.threads, [&](int idx) {
        const int i = idx / ns;
        const std::string& id = ids[idx % ns];
        const cplx s = axis_point(spec.axis, grid[i]);
        MatrixXc G;
        try {
            G = interconnection(s, bm.A, bm.structure(id), spec.variant);
        } catch (const SharpSingularError&) {
            if (!spec.allow_pole) throw;
            rows[idx] = {grid[i], id, to_string(spec.variant), kNaN, kNaN, kNaN, kNaN, false, true};
            return;
        }
        const MuBound mb = mu_two_block(G, opts);
        const double gap = mb.upper > 0.0 ? (mb.upper - mb.lower) / mb.upper : 0.0;
        rows[idx] = {grid[i], id, to_string(spec.variant), mb.lower, mb.upper, mb.delta_star, gap,
                     mb.converged, false};
    });
    ResultTable t;
    t.columns = {axis_column(spec.axis), "structure", "variant", "mu_lower", "mu_upper",
                 "delta_star", "rel_gap", "converged", "pole"};
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

ResultTable run_detuning_sweep(const SweepSpec& spec) {
    const auto grid = spec.grid.values();
    const int n = static_cast<int>(grid.size());
    std::vector<std::vector<Cell>> rows(n);
    parallel_for(n, spec.threads, [&](int i) {
        const double D = grid[i];
        const double margin = stability_margin(spec.alpha, D, spec.gamma);
        double c_formula = kNaN;
        if (spec.alpha != 0.0) {
            const double r = D / spec.alpha;
            c_formula = 1.0 / (0.5 * r * r + 1.0);
        }
        double c_num = kNaN, sens = kNaN;
        bool degenerate = margin < 1e-9;
        try {
            c_num = concurrence(numerical_steady_state(spec.alpha, D, spec.gamma));
            sens = concurrence_log_sensitivity(spec.alpha, D, spec.gamma, spec.sensitivity_param);
        } catch (const SteadyStateManifoldError&) {
            degenerate = true;
        } catch (const ValidationError&) {
            degenerate = true;
        }
        rows[i] = {D, c_formula, c_num, sens, margin, degenerate};
    });
    ResultTable t;
    t.columns = {"Delta", "C_ss", "C_numeric", "log_sensitivity", "margin", "degenerate"};
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

std::vector<GeneralizedEigenvalue> table1_reference(int k) {
    switch (k) {
    case 1:
    case 2: return {};
    case 3:
    case 4: return {{-0.2, 2}};
    case 5: return {{-1.0, 2}};
    case 6:
    case 7: return {{-2.6465, 1}, {-1.0462, 1}, {-0.6346, 1}, {-0.0057, 1}};
    default: throw ValidationError("structure index must be in 1..7");
    }
}

std::vector<Table1Row> table1(const CavityParams& p, double tol) {
    const BlochModel bm = assemble(cavity_system(p));
    std::vector<Table1Row> out;
    for (int k = 1; k <= kNumStructures; ++k) {
        Table1Row row;
        row.k = k;
        row.computed = generalized_eigs(bm.A, structure_matrix(k, bm.basis));
        row.reference = table1_reference(k);
        row.values_match = row.computed.size() == row.reference.size();
        row.multiplicities_match = row.values_match;
        if (row.values_match) {
            for (size_t i = 0; i < row.computed.size(); ++i) {
                const double dev = std::abs(row.computed[i].value - row.reference[i].value);
                row.max_deviation = std::max(row.max_deviation, dev);
                if (dev > tol) row.values_match = false;
                if (row.computed[i].multiplicity != row.reference[i].multiplicity)
                    row.multiplicities_match = false;
            }
        } else {
            row.max_deviation = std::numeric_limits<double>::infinity();
        }
        out.push_back(std::move(row));
    }
    return out;
}

ResultTable run_table1(const CavityParams& p, double tol) {
    ResultTable t;
    t.columns = {"structure", "computed", "reference", "max_deviation", "values_match",
                 "multiplicities_match"};
    for (const auto& r : table1(p, tol))
        t.add_row({structure_name(r.k), describe(r.computed), describe(r.reference), r.max_deviation,
                   r.values_match, r.multiplicities_match});
    return t;
}

std::vector<VerifyCheck> verify(double tol_rank, int threads) {
    std::vector<VerifyCheck> checks;
    const auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({name, pass, detail});
    };

    for (const auto& r : table1()) {
        add("pencil " + structure_name(r.k) + " values", r.values_match,
            describe(r.computed) + " vs " + describe(r.reference));
        add("pencil " + structure_name(r.k) + " multiplicities", r.multiplicities_match,
            describe(r.computed) + " vs " + describe(r.reference));
    }

    const auto rank_of = [&](const CavityParams& p) {
        return rank_profile(assemble(cavity_system(p)).A, tol_rank).rank;
    };
    const int r_nom = rank_of(nominal_gain());
    const int r_d0 = rank_of(CavityParams::symmetric(1.0, 0.0, 1.0));
    const int r_g0 = rank_of(CavityParams::symmetric(1.0, 1.0, 0.0));
    CavityParams generic{cplx(1.0, 0.0), cplx(0.7, 0.0), 0.3, -1.1, 0.0, 0.0};
    const int r_gen = rank_of(generic);
    add("rank nominal = 15", r_nom == 15, std::to_string(r_nom));
    add("rank zero detuning = 14", r_d0 == 14, std::to_string(r_d0));
    add("rank unitary symmetric = 10", r_g0 == 10, std::to_string(r_g0));
    add("rank unitary generic = 12", r_gen == 12, std::to_string(r_gen));

    double ex1 = 0.0;
    for (auto [w, d, tau] : {std::array<double, 3>{1, 0.3, 2}, {5, 1, 0.5}, {0, 0.7, 1}}) {
        const auto pr = example1_pair(w, d, tau);
        ex1 = std::max(ex1, (pr.first.matrix() - pr.second.matrix()).norm());
    }
    add("dephasing/preparation indistinguishable", ex1 < 1e-12, format_double(ex1));

    double cmax = 0.0;
    for (double D : {0.5, 1.0, 2.0}) {
        const auto ss = cavity_steady_state(1.0, D, 1.0);
        const double c = concurrence(HermitianOperator(ss.psi * ss.psi.adjoint()));
        cmax = std::max(cmax, std::abs(c - ss.C_ss));
    }
    add("steady-state concurrence formula", cmax < 1e-10, format_double(cmax));

    SweepSpec dspec;
    dspec.grid = Grid{1e-2, 1e2, 41, true};
    dspec.delta = 0.5;
    dspec.threads = threads;
    const ResultTable dg = run_gain_sweep(builtin_model("dephasing"), dspec);
    double gmax = 0.0;
    for (size_t i = 0; i < dg.rows.size(); ++i) gmax = std::max(gmax, dg.number(i, "gain"));
    add("dephasing gain bound = 1", std::abs(gmax - 1.0) < 1e-6, format_double(gmax));

    SweepSpec cspec;
    cspec.grid = Grid{1e-2, 1e2, 21, true};
    cspec.delta = 1.0;
    cspec.threads = threads;
    const ResultTable cg = run_gain_sweep(builtin_model("cavity:gain"), cspec);
    double sym = 0.0;
    const size_t g = cg.column("gain");
    for (size_t i = 0; i < cg.rows.size(); i += kNumStructures) {
        const auto gain = [&](int k) { return std::get<double>(cg.rows[i + k - 1][g]); };
        sym = std::max({sym, std::abs(gain(1) - gain(2)), std::abs(gain(3) - gain(4)),
                        std::abs(gain(6) - gain(7))});
    }
    add("paired structures give identical gains", sym < 1e-10, format_double(sym));

    const BlochModel nom = assemble(cavity_system(nominal_gain()));
    const double at0 = spectral_norm(sharp_inverse(phi(0.0, nom.A)));
    bool max_at_zero = true;
    for (double w : Grid{1e-2, 1e2, 41, true}.values())
        max_at_zero = max_at_zero && spectral_norm(sharp_inverse(phi(cplx(0.0, w), nom.A))) <= at0;
    add("||Phi#(i omega)|| maximal at omega = 0", max_at_zero, format_double(at0));
    const double mp = pinv_norm(phi(0.0, nom.A));
    add("#-inverse differs from Moore-Penrose at s = 0", std::abs(at0 - mp) > 1e-3,
        format_double(at0) + " vs " + format_double(mp));
    return checks;
}

} // namespace qrobust
