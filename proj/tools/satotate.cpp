// Command-line front end: character tables, point counting, orthogonality
// reports, moment tables, convergence profiles and synthetic sampling.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "satotate/bases.hpp"
#include "satotate/charring.hpp"
#include "satotate/errors.hpp"
#include "satotate/frobdata.hpp"
#include "satotate/groupspec.hpp"
#include "satotate/haar.hpp"
#include "satotate/parallel.hpp"
#include "satotate/stats.hpp"
#include "satotate/weyl.hpp"

namespace {

using namespace satotate;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%8.3f", v);
    return buf;
}

std::string weight_text(const WeightOmega& w) {
    std::string out = "(";
    for (int i = 0; i < w.genus(); ++i) {
        if (i) out += ",";
        out += std::to_string(w.coords[i]);
    }
    return out + ")";
}

std::vector<WeightOmega> parse_weight_list(const std::string& text, int g) {
    std::vector<WeightOmega> out;
    std::istringstream ws(text);
    std::string one;
    while (std::getline(ws, one, ';')) {
        WeightOmega w;
        std::istringstream cs(one);
        std::string c;
        while (std::getline(cs, c, ','))
            w.coords.push_back(std::stoi(c));
        if (w.genus() != g)
            throw UsageError("weight '" + one + "' does not have " +
                             std::to_string(g) + " coordinates");
        out.push_back(std::move(w));
    }
    if (out.empty()) throw UsageError("empty weight list");
    return out;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw DataError("cannot open '" + path + "' for writing");
    return file;
}

void write_matrix(std::ostream& os, const std::vector<std::vector<double>>& m) {
    for (const auto& row : m) {
        for (size_t j = 0; j < row.size(); ++j)
            os << (j ? "," : "") << fmt(row[j]);
        os << "\n";
    }
}

void print_report(std::ostream& os, const InnerProductReport& rep) {
    os << "weights:";
    for (const auto& l : rep.labels) os << " " << l;
    os << "\nsample size: " << rep.sample_size << "\n";
    os << "sample matrix (rounded to 3 digits):\n";
    for (size_t i = 0; i < rep.sample.size(); ++i) {
        for (size_t j = 0; j < rep.sample.size(); ++j)
            os << fmt3(rep.sample[i][j]);
        os << "\n";
    }
    os << "rounded matrix:\n";
    for (const auto& row : rep.rounded) {
        for (size_t j = 0; j < row.size(); ++j) os << (j ? "\t" : "") << row[j];
        os << "\n";
    }
    os << "Err = " << fmt(rep.Err) << "\n";
    if (!rep.flagged.empty()) {
        os << "entries far from an integer (guarded rounding):";
        for (auto [i, j] : rep.flagged) os << " (" << i << "," << j << ")";
        os << "\n";
    }
}

void write_report_csv(std::ostream& os, const InnerProductReport& rep) {
    os << "# weights\n";
    for (const auto& l : rep.labels) os << l << "\n";
    os << "# sample matrix\n";
    write_matrix(os, rep.sample);
    os << "# expected matrix\n";
    write_matrix(os, rep.expected);
    os << "# err matrix\n";
    write_matrix(os, rep.err);
    os << "# Err\n" << fmt(rep.Err) << "\n";
    os << "# rounded matrix\n";
    for (const auto& row : rep.rounded) {
        for (size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
        os << "\n";
    }
    os << "# flagged entries\n";
    for (auto [i, j] : rep.flagged) os << i << "," << j << "\n";
}

// Shared input-source flags: exactly one of --data / --synthetic.
struct SourceOpts {
    std::string data_path;
    std::string synth_spec;
    long long count = 1 << 12;
    uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--data", data_path, "sample data file to ingest");
        cmd->add_option("--synthetic", synth_spec,
                        "group spec to draw a synthetic sample from");
        cmd->add_option("--count", count, "synthetic sample size");
        cmd->add_option("--seed", seed, "synthetic sampler seed");
    }

    SampleSet load() const {
        if (data_path.empty() == synth_spec.empty())
            throw UsageError("exactly one of --data or --synthetic is required");
        if (!data_path.empty()) return read_sample(data_path);
        return haar_sample(GroupSpec::parse(synth_spec), count, seed);
    }
};

int cmd_characters(int g, int d, const std::string& basis_name,
                   const std::string& format, const std::string& out_path) {
    Basis basis = Basis::Chi;
    if (basis_name == "chi") basis = Basis::Chi;
    else if (basis_name == "s") basis = Basis::S;
    else if (basis_name == "a") basis = Basis::A;
    else throw UsageError("basis must be one of chi, s, a");

    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    const auto weights = enumerate_dominant(g, d);
    if (format == "csv") {
        os << "#";
        for (int i = 1; i <= g; ++i) os << (i > 1 ? "," : " ") << "x" << i;
        os << ",polynomial\n";
        for (const WeightOmega& w : weights) {
            for (int i = 0; i < g; ++i) os << w.coords[i] << ",";
            os << character_in_basis(g, w, basis).str() << "\n";
        }
    } else if (format == "text") {
        size_t width = 8;
        for (const WeightOmega& w : weights)
            width = std::max(width, weight_text(w).size() + 2);
        for (const WeightOmega& w : weights) {
            std::string lw = weight_text(w);
            lw.resize(width, ' ');
            os << lw << character_in_basis(g, w, basis).str() << "\n";
        }
    } else {
        throw UsageError("format must be text or csv");
    }
    return 0;
}

int cmd_count(const std::string& curve_text, int first_n, long long budget,
              const std::string& out_path, int workers) {
    const CurveSpec curve = CurveSpec::parse(curve_text);
    const auto good = good_primes(curve, first_n);
    // Report skipped (bad) primes up to the largest prime used.
    {
        std::vector<long long> skipped;
        long long limit = good.empty() ? 0 : good.back();
        for (long long p = 2; p <= limit; ++p) {
            bool isprime = p >= 2;
            for (long long q = 2; q * q <= p && isprime; ++q)
                isprime = p % q != 0;
            if (isprime && !std::binary_search(good.begin(), good.end(), p))
                skipped.push_back(p);
        }
        std::cerr << "curve " << curve.label << " (genus " << curve.genus
                  << "), skipping bad primes:";
        for (long long p : skipped) std::cerr << " " << p;
        std::cerr << "\n";
    }
    const SampleSet set = build_sample(curve, first_n, budget, workers);
    write_sample(set, out_path);
    std::cerr << "wrote " << set.records.size() << " records to " << out_path
              << " (p = " << set.records.front().p << " .. "
              << set.records.back().p << ")\n";
    return 0;
}

int cmd_sample(const std::string& spec_text, long long count, uint64_t seed,
               const std::string& out_path) {
    const GroupSpec spec = GroupSpec::parse(spec_text);
    const SampleSet set = haar_sample(spec, count, seed);
    write_sample(set, out_path);
    std::cerr << "wrote " << set.records.size() << " synthetic draws from "
              << spec.str() << " to " << out_path << "\n";
    return 0;
}

int cmd_analyze(const SourceOpts& src, const std::string& group_text, int degree,
                const std::string& weights_text, int nodes, bool product_basis,
                int per_factor, const std::string& out_path, int workers) {
    const SampleSet set = src.load();
    const GroupSpec spec = GroupSpec::parse(group_text);
    if (spec.ambient_genus() != set.genus)
        throw DataError("group spec genus " + std::to_string(spec.ambient_genus()) +
                        " does not match data genus " + std::to_string(set.genus));

    InnerProductReport rep;
    if (product_basis) {
        const auto grid = product_weight_grid(spec, per_factor);
        rep = product_err_report(set, spec, grid, nodes, workers);
    } else {
        std::vector<WeightOmega> I;
        if (!weights_text.empty())
            I = parse_weight_list(weights_text, set.genus);
        else
            I = enumerate_dominant(set.genus, degree);
        rep = err_report(set, spec, I, nodes, workers);
    }
    print_report(std::cout, rep);
    if (!out_path.empty()) {
        std::ofstream file;
        std::ostream& os = open_output(file, out_path);
        write_report_csv(os, rep);
        std::cerr << "report written to " << out_path << "\n";
    }
    return 0;
}

int cmd_moments(const SourceOpts& src, int index, int max_order,
                const std::string& group_text, int nodes,
                const std::string& out_path) {
    const SampleSet set = src.load();
    if (index < 1 || index > set.genus)
        throw UsageError("--index must be between 1 and the genus");
    const GroupSpec spec = group_text.empty()
                               ? GroupSpec::parse("USp(" + std::to_string(2 * set.genus) + ")")
                               : GroupSpec::parse(group_text);
    const auto sample = sample_moments(set, index, max_order);
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    os << "# n,sample,expected\n";
    for (int n = 1; n <= max_order; ++n) {
        const double exp = moment_expectation(spec, index, n, nodes);
        os << n << "," << fmt(sample[n - 1]) << "," << fmt(exp) << "\n";
    }
    return 0;
}

int cmd_converge(const SourceOpts& src, const std::string& group_text,
                 int degree, const std::string& weights_text, int chunk,
                 int nodes, const std::string& out_path, bool plot,
                 int workers) {
    const SampleSet set = src.load();
    const GroupSpec spec = GroupSpec::parse(group_text);
    std::vector<WeightOmega> I;
    if (!weights_text.empty())
        I = parse_weight_list(weights_text, set.genus);
    else
        I = enumerate_dominant(set.genus, degree);
    const ConvergenceProfile profile =
        convergence_profile(set, spec, I, chunk, nodes, workers);

    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    os << "# n,delta,delta_bar,sqrtk_delta_bar\n";
    for (const auto& row : profile.rows)
        os << row.n << "," << fmt(row.delta) << "," << fmt(row.delta_bar) << ","
           << fmt(row.sqrtk_delta_bar) << "\n";
    std::cerr << "profile slope of log(delta_bar) vs log(n): "
              << fmt(profile_slope(profile)) << "\n";

    if (plot && !out_path.empty()) {
        const std::string script = out_path + ".plot.py";
        std::ofstream ps(script);
        ps << "#!/usr/bin/env python3\n"
              "import csv\n"
              "import matplotlib\n"
              "matplotlib.use('Agg')\n"
              "import matplotlib.pyplot as plt\n"
              "n, d, db, sdb = [], [], [], []\n"
              "with open(" << std::quoted(out_path) << ") as fh:\n"
              "    for row in csv.reader(r for r in fh if not r.startswith('#')):\n"
              "        n.append(float(row[0])); d.append(float(row[1]))\n"
              "        db.append(float(row[2])); sdb.append(float(row[3]))\n"
              "fig, axes = plt.subplots(1, 3, figsize=(15, 4))\n"
              "axes[0].loglog(n, d); axes[0].set_title('delta(k)')\n"
              "axes[1].loglog(n, db); axes[1].set_title('delta_bar(k)')\n"
              "axes[2].semilogx(n, sdb); axes[2].set_title('sqrt(k)*delta_bar(k)')\n"
              "for ax in axes: ax.set_xlabel('n')\n"
              "fig.tight_layout()\n"
              "fig.savefig(" << std::quoted(out_path + ".png") << ", dpi=120)\n"
              "print('wrote " << out_path << ".png')\n";
        std::cerr << "plot script written to " << script << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sato-Tate group identification via USp(2g) character "
                 "orthogonality"};
    app.require_subcommand(1);
    int workers = 0;
    app.add_option("--workers", workers, "worker threads (0 = all cores)");

    // characters
    auto* chars = app.add_subcommand("characters",
                                     "print irreducible character tables");
    int ch_g = 2, ch_d = 2;
    std::string ch_basis = "chi", ch_format = "text", ch_out;
    chars->add_option("--genus,-g", ch_g, "genus g of USp(2g)")->required();
    chars->add_option("--degree,-d", ch_d, "max coordinate sum of the weights")
        ->required();
    chars->add_option("--basis", ch_basis, "chi | s | a");
    chars->add_option("--format", ch_format, "text | csv");
    chars->add_option("--out", ch_out, "output file (default stdout)");

    // count
    auto* count = app.add_subcommand("count",
                                     "count points and write a data file");
    std::string co_curve, co_out;
    int co_first = 16;
    long long co_budget = kDefaultCountBudget;
    count->add_option("--curve", co_curve, "curve, e.g. \"y^2=x^5+x+1\"")
        ->required();
    count->add_option("--first", co_first, "number of good primes")->required();
    count->add_option("--budget", co_budget, "max p^k for naive counting");
    count->add_option("--out", co_out, "output data file")->required();

    // sample
    auto* sample = app.add_subcommand("sample",
                                      "draw a synthetic Haar sample");
    std::string sa_spec, sa_out;
    long long sa_count = 1 << 12;
    uint64_t sa_seed = 1;
    sample->add_option("--group", sa_spec, "group spec, e.g. SU2*USp(4)")
        ->required();
    sample->add_option("--count", sa_count, "number of draws");
    sample->add_option("--seed", sa_seed, "RNG seed");
    sample->add_option("--out", sa_out, "output data file")->required();

    // analyze
    auto* analyze = app.add_subcommand(
        "analyze", "sample vs expected character inner products");
    SourceOpts an_src;
    an_src.attach(analyze);
    std::string an_group, an_weights, an_out;
    int an_degree = 2, an_nodes = 128, an_per_factor = 4;
    bool an_product = false;
    analyze->add_option("--group", an_group, "candidate Sato-Tate group")
        ->required();
    analyze->add_option("--degree,-d", an_degree,
                        "use the weight set I_d of the ambient group");
    analyze->add_option("--weights", an_weights,
                        "explicit weights, e.g. \"0,0;1,0;0,1\"");
    analyze->add_option("--nodes", an_nodes, "quadrature nodes per dimension");
    analyze->add_flag("--product-basis", an_product,
                      "use products of factor characters");
    analyze->add_option("--per-factor", an_per_factor,
                        "factor characters per factor with --product-basis");
    analyze->add_option("--out", an_out, "CSV report path");

    // moments
    auto* moments = app.add_subcommand("moments", "sample moment table");
    SourceOpts mo_src;
    mo_src.attach(moments);
    std::string mo_group, mo_out;
    int mo_index = 1, mo_order = 10, mo_nodes = 128;
    moments->add_option("--index", mo_index, "coefficient index i of a_i")
        ->required();
    moments->add_option("--max-order", mo_order, "largest moment order");
    moments->add_option("--group", mo_group,
                        "group for the expected column (default USp(2g))");
    moments->add_option("--nodes", mo_nodes, "quadrature nodes per dimension");
    moments->add_option("--out", mo_out, "output CSV (default stdout)");

    // converge
    auto* converge = app.add_subcommand("converge",
                                        "Err convergence profile");
    SourceOpts cv_src;
    cv_src.attach(converge);
    std::string cv_group, cv_weights, cv_out;
    int cv_degree = 2, cv_chunk = 512, cv_nodes = 128;
    bool cv_plot = false;
    converge->add_option("--group", cv_group, "candidate Sato-Tate group")
        ->required();
    converge->add_option("--degree,-d", cv_degree, "weight set I_d");
    converge->add_option("--weights", cv_weights, "explicit weights");
    converge->add_option("--chunk", cv_chunk, "records per profile step")
        ->required();
    converge->add_option("--nodes", cv_nodes, "quadrature nodes per dimension");
    converge->add_option("--out", cv_out, "output CSV")->required();
    converge->add_flag("--plot", cv_plot, "emit a plotting script");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // usage errors are exit code 1
    }

    try {
        if (chars->parsed())
            return cmd_characters(ch_g, ch_d, ch_basis, ch_format, ch_out);
        if (count->parsed())
            return cmd_count(co_curve, co_first, co_budget, co_out, workers);
        if (sample->parsed())
            return cmd_sample(sa_spec, sa_count, sa_seed, sa_out);
        if (analyze->parsed())
            return cmd_analyze(an_src, an_group, an_degree, an_weights, an_nodes,
                               an_product, an_per_factor, an_out, workers);
        if (moments->parsed())
            return cmd_moments(mo_src, mo_index, mo_order, mo_group, mo_nodes,
                               mo_out);
        if (converge->parsed())
            return cmd_converge(cv_src, cv_group, cv_degree, cv_weights, cv_chunk,
                                cv_nodes, cv_out, cv_plot, workers);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
