// sweeps.hpp — Sweep orchestration, result tables and regression checks for the CLI

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "qrobust/cavity.hpp"
#include "qrobust/model_io.hpp"
#include "qrobust/mu.hpp"

namespace qrobust {

using Cell = std::variant<double, long long, std::string, bool>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    size_t column(const std::string& name) const;
    double number(size_t row, const std::string& name) const;
    const std::string& text(size_t row, const std::string& name) const;
    bool flag(size_t row, const std::string& name) const;
};

// CSV with a header row; doubles with 12 significant digits.
void write_csv(std::ostream& os, const ResultTable& t);
// Array of records; non-finite numbers become null.
void write_json(std::ostream& os, const ResultTable& t);

enum class Axis { freq, real, detuning };
Axis parse_axis(const std::string& s);

struct Grid {
    double min = 1e-2;
    double max = 1e2;
    int points = 41;
    bool log = true;

    // "min,max,points,lin|log"
    static Grid parse(const std::string& s);
    void validate() const;
    std::vector<double> values() const;
};

struct SweepSpec {
    Axis axis = Axis::freq;
    Grid grid;
    std::vector<std::string> structures;  // empty: every structure of the model
    double delta = 0.1;
    Variant variant = Variant::dynamic;
    double delta_max = 5.0;
    bool allow_pole = false;
    int threads = 0;                       // 0: hardware concurrency
    double alpha = 1.0;                    // detuning sweep
    double gamma = 1.0;
    CavityParam sensitivity_param = CavityParam::Delta;
};

// Runs fn(i) for i in [0, n) on a worker pool; results are stored by index.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

// ||T(s, delta S_k)|| per (grid point, structure), plus ||Phi#(s)|| and the
// Moore-Penrose counterpart ||Phi(s)^+||.
ResultTable run_gain_sweep(const LoadedModel& model, const SweepSpec& spec);

// mu lower/upper bounds of the chosen interconnection per (grid point, structure).
ResultTable run_mu_sweep(const LoadedModel& model, const SweepSpec& spec);

// Stability margin, steady-state concurrence and its log-sensitivity per detuning.
ResultTable run_detuning_sweep(const SweepSpec& spec);

struct Table1Row {
    int k = 0;
    std::vector<GeneralizedEigenvalue> computed;
    std::vector<GeneralizedEigenvalue> reference;
    double max_deviation = 0.0;   // over matched values
    bool values_match = false;    // same distinct values within tol
    bool multiplicities_match = false;
};

// Published reference values for the pencils (A, -S_k) at the mu-study parameters.
std::vector<GeneralizedEigenvalue> table1_reference(int k);
std::vector<Table1Row> table1(const CavityParams& p = nominal_mu(), double tol = 2e-3);
ResultTable run_table1(const CavityParams& p = nominal_mu(), double tol = 2e-3);

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<VerifyCheck> verify(double tol_rank = 1e-9, int threads = 0);

} // namespace qrobust
