// Acceptance checks. One line per criterion; exit status is the number of
// failed criteria.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mvi/mvi.hpp"
#include "mvi_cli.hpp"

using namespace mvi;
namespace fs = std::filesystem;

namespace {

// Collects the first few failure messages of one criterion.
struct Check {
    int failures = 0;
    std::string first;

    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (failures++ == 0) first = what;
    }
};

int report(int id, const std::string& name, const std::function<void(Check&)>& body) {
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    if (c.failures == 0) {
        std::printf("[PASS] criterion %d: %s\n", id, name.c_str());
        return 0;
    }
    std::printf("[FAIL] criterion %d: %s (%d failures; first: %s)\n", id, name.c_str(), c.failures, c.first.c_str());
    return 1;
}

std::string num(double v) { return format_number(v); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

CantileverBeam random_beam(std::mt19937_64& rng) {
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    CantileverBeam b;
    b.length = u(50, 500) * units::um;
    b.width_inplane = u(1, 10) * units::um;
    b.thickness_outofplane = u(1, 20) * units::um;
    b.gap = u(0.5, 5) * units::um;
    b.electrode_overlap_area = u(100, 10000) * units::um2;
    b.youngs_modulus = u(100, 200) * units::GPa;
    b.density = u(2000, 8000);
    return b;
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mvi");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return mvi::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

void criterion_steps(Check& c) {
    const auto printed = load_reference_data().steps;
    const auto table = enumerate_steps(5, 1.0);
    c.expect(table.steps.size() == 15 && printed.size() == 15, "five coils must give 15 steps");
    for (std::size_t i = 0; i < std::min(table.steps.size(), printed.size()); ++i) {
        const double dev = std::abs(table.steps[i].factor - printed[i].factor.value);
        c.expect(dev <= 0.005, "step " + std::to_string(i + 1) + ": " + num(table.steps[i].factor) + " vs " +
                                   printed[i].factor.text);
    }
    for (unsigned n = 1; n <= 10; ++n) {
        const auto t = enumerate_steps(n, 1.0);
        c.expect(t.steps.size() == n * (n + 1) / 2, "n=" + std::to_string(n) + " count");
        std::set<double> distinct;
        for (const auto& s : t.steps) distinct.insert(s.factor);
        c.expect(distinct.size() == t.steps.size(), "n=" + std::to_string(n) + " values not distinct");
    }
}

void criterion_solver(Check& c) {
    std::size_t checked = 0;
    for (unsigned n = 1; n <= 8; ++n) {
        for (unsigned k = 0; k <= n; ++k) {
            for (unsigned m = 0; k + m <= n; ++m) {
                const SwitchConfiguration cfg{k, m, n};
                if ((k == 0 && m == 0) || m == 1) continue;
                const double closed = total_inductance(cfg, 1.0);
                const double solved = effective_inductance(build_network(cfg, 1.0));
                c.expect(rel(solved, closed) <= 1e-9, "n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                                          " m=" + std::to_string(m));
                ++checked;
            }
        }
        // every switch word that parses, including canonicalized ones
        std::size_t words = 1;
        for (unsigned i = 0; i < n; ++i) words *= 3;
        for (std::size_t code = 0; code < words; ++code) {
            std::string w;
            for (std::size_t x = code, i = 0; i < n; ++i, x /= 3) w += "SPO"[x % 3];
            ParsedSwitchWord p;
            try {
                p = parse_switch_word(w);
            } catch (const Error&) {
                continue;
            }
            const double closed = total_inductance(p.config, 3e-9);
            const double solved = effective_inductance(build_network(p.config, 3e-9));
            c.expect(rel(solved, closed) <= 1e-9, "word " + w);
        }
    }
    c.expect(checked > 0, "no configurations checked");
}

void criterion_coils(Check& c) {
    const auto rep = reproduce_coil_table();
    std::vector<const ComparisonRow*> a, b;
    for (const auto& r : rep.rows) (r.table == "coils/A" ? a : b).push_back(&r);
    c.expect(a.size() == 6 && b.size() == 3, "expected 6 literal and 3 scaled rows");
    if (a.size() != 6 || b.size() != 3) return;
    for (int i = 0; i < 3; ++i)
        c.expect(a[i]->verdict == Verdict::match && a[i]->rel_deviation <= 0.005,
                 "row " + std::to_string(i + 1) + ": " + num(a[i]->computed) + " vs " + a[i]->reference_text);
    for (int i = 0; i < 3; ++i) {
        c.expect(b[i]->verdict == Verdict::match && b[i]->rel_deviation <= 0.005,
                 "row " + std::to_string(i + 4) + " (x10): " + num(b[i]->computed) + " vs " + b[i]->reference_text);
        const auto* lit = a[i + 3];
        c.expect(lit->verdict == Verdict::flagged_discrepancy, "row " + std::to_string(i + 4) + " not flagged");
        c.expect(std::abs(lit->reference / lit->computed / 100.0 - 1.0) <= 0.005,
                 "row " + std::to_string(i + 4) + " factor is not 100");
    }
    c.expect(rep.count(Verdict::mismatch) == 0, "unexpected mismatches");
}

void criterion_energy(Check& c) {
    const auto printed = load_reference_data().energy;
    c.expect(printed.size() == 6, "expected six rows");
    for (const auto& p : printed) {
        const double l = units::to_nH(inductance_from_energy(p.energy_nJ.value * units::nJ, 1.0));
        c.expect(std::abs(l - p.inductance_nH.value) <= 0.002, p.label + ": " + num(l) + " vs " + p.inductance_nH.text);
    }
    c.expect(check_energy_consistency(printed).passed(), "report disagrees");
}

void criterion_modes(Check& c) {
    std::mt19937_64 rng(20261018);
    for (int i = 0; i < 100; ++i) {
        const auto b = random_beam(rng);
        const double f1 = modal_frequency(b, Plane::in_plane, 1);
        const double ratio = modal_frequency(b, Plane::in_plane, 2) / f1;
        c.expect(std::abs(ratio - 6.2669) <= 1e-4, "mode ratio " + num(ratio));
        const double tw = b.thickness_outofplane / b.width_inplane;
        const double plane_ratio = modal_frequency(b, Plane::out_of_plane, 1) / f1;
        c.expect(rel(plane_ratio, tw) <= 1e-9, "plane ratio " + num(plane_ratio) + " vs " + num(tw));
    }
    CantileverBeam partial;
    partial.length = 100 * units::um;
    partial.thickness_outofplane = 5 * units::um;
    partial.gap = 2 * units::um;
    partial.electrode_overlap_area = 1000 * units::um2;
    partial.youngs_modulus = 169 * units::GPa;
    partial.density = 2330;
    const auto cal = calibrate_from_fundamental(32.772 * units::kHz, Plane::in_plane, partial,
                                                BeamDimension::width_inplane);
    const double f1 = modal_frequency(cal, Plane::in_plane, 1);
    const double f2 = modal_frequency(cal, Plane::in_plane, 2);
    c.expect(rel(f1, 32.772e3) <= 1e-12, "calibrated f1 " + num(f1));
    c.expect(rel(f2, 205.33e3) <= 0.002, "calibrated f2 " + num(f2));
}

void criterion_pull_in(Check& c) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const auto b = random_beam(rng);
        const double vpi = pull_in_voltage(b);
        const auto edge = static_deflection(b, vpi * (1.0 - 1e-10), Side::left);
        c.expect(edge.stable, "unstable just below pull-in");
        c.expect(std::abs(std::abs(edge.tip_displacement) - b.gap / 3.0) <= 1e-4 * b.gap,
                 "pull-in displacement " + num(edge.tip_displacement / b.gap) + " g");
        const auto at = static_deflection(b, vpi, Side::left);
        c.expect(!at.stable && std::abs(std::abs(at.tip_displacement) - b.gap / 3.0) <= 1e-4 * b.gap,
                 "state at pull-in");

        double prev = -1.0;
        for (int j = 0; j < 200; ++j) {
            const double v = vpi * j / 200.0;
            const auto d = static_deflection(b, v, Side::right);
            c.expect(d.stable && d.tip_displacement > prev, "x(V) not strictly increasing at " + num(v) + " V");
            prev = d.tip_displacement;
        }

        auto wide = b;
        wide.gap = 4.0 * b.gap;
        const double scale = pull_in_voltage(wide) / vpi;
        c.expect(std::abs(scale / 8.0 - 1.0) <= 1e-9, "V_PI(4g)/V_PI(g) = " + num(scale));
    }
}

void criterion_properties(Check& c) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::uniform_int_distribution<unsigned> turns(1, 500);
    for (int i = 0; i < 500; ++i) {
        CoilGeometry g;
        g.turns = turns(rng);
        g.winding_area = u(rng) * 1e-11;
        g.length = u(rng) * 1e-3;
        const CoreMaterial core{"m", u(rng) * 40, std::nullopt};
        const double l = solenoid_inductance(g, core);

        auto g2 = g;
        g2.turns *= 2;
        c.expect(solenoid_inductance(g2, core) == 4.0 * l, "N^2 scaling");
        g2 = g;
        g2.winding_area *= 2;
        c.expect(solenoid_inductance(g2, core) == 2.0 * l, "A scaling");
        g2 = g;
        g2.length *= 2;
        c.expect(solenoid_inductance(g2, core) == 0.5 * l, "1/l scaling");
        auto core2 = core;
        core2.mu_r *= 2;
        c.expect(solenoid_inductance(g, core2) == 2.0 * l, "mu_r scaling");

        const double current = u(rng) * 1e-3;
        const double back = inductance_from_energy(magnetic_energy(l, current), current);
        c.expect(rel(back, l) <= 1e-12, "energy roundtrip");
    }

    std::vector<Row> rows;
    for (int i = 0; i < 100; ++i) {
        Row r;
        r.add("i", i).add("x", std::ldexp(u(rng), i - 50)).add("third", i / 3.0).add("tag", "a,\"b\"\n" + num(i));
        rows.push_back(std::move(r));
    }
    for (Format f : {Format::csv, Format::json}) {
        std::stringstream ss;
        emit(rows, f, ss);
        const auto back = f == Format::csv ? read_csv(ss) : read_json(ss);
        bool same = back.size() == rows.size();
        for (std::size_t i = 0; same && i < rows.size(); ++i) same = back[i].cells == rows[i].cells;
        c.expect(same, f == Format::csv ? "csv roundtrip" : "json roundtrip");
    }

    const fs::path tmp = fs::temp_directory_path() / "mvi_acceptance_data";
    fs::remove_all(tmp);
    fs::copy(default_data_dir(), tmp, fs::copy_options::recursive);
    c.expect(run_cli({"verify", "--data-dir", tmp.string()}) == 0, "verify on pristine data must exit 0");
    const fs::path steps = tmp / "table1_steps.csv";
    std::string text;
    {
        std::ifstream is(steps);
        text.assign(std::istreambuf_iterator<char>(is), {});
    }
    const auto pos = text.find("1.25 L");
    c.expect(pos != std::string::npos, "fixture lacks the 1.25 row");
    if (pos != std::string::npos) {
        text.replace(pos, 4, "1.35");
        std::ofstream(steps) << text;
        c.expect(run_cli({"verify", "--data-dir", tmp.string()}) == 1, "verify on corrupted data must exit 1");
    }
    fs::remove_all(tmp);
}

} // namespace

int main() {
    int failed = 0;
    failed += report(1, "step table and step counts", criterion_steps);
    failed += report(2, "graph solver equals closed form for n <= 8", criterion_solver);
    failed += report(3, "coil design table with discrepancy flags", criterion_coils);
    failed += report(4, "energy/inductance consistency", criterion_energy);
    failed += report(5, "modal ratios and calibrated second mode", criterion_modes);
    failed += report(6, "pull-in properties", criterion_pull_in);
    failed += report(7, "scaling laws, roundtrips and verify exit codes", criterion_properties);
    std::printf("%s: %d of 7 criteria failed\n", failed ? "FAIL" : "PASS", failed);
    return failed;
}
