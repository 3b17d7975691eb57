#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "mvi/config.hpp"
#include "mvi/sweep.hpp"

using namespace mvi;

namespace {

SweepSpec beam_voltage_sweep() {
    SweepSpec s;
    s.subject = SweepSubject::beam;
    std::vector<double> volts;
    for (int v = 1; v <= 15; ++v) volts.push_back(v);
    s.grid = {{"voltage", volts}};
    s.fixed = {{"length_um", 100}, {"width_um", 2}, {"thickness_um", 5}, {"gap_um", 2},
               {"electrode_area_um2", 1000}, {"youngs_modulus_gpa", 169}, {"density", 2330}};
    return s;
}

} // namespace

TEST(Sweep, StepCounts) {
    SweepSpec s;
    s.subject = SweepSubject::steps;
    s.grid = {{"n", {1, 2, 3, 4, 5, 6}}};
    const auto rows = run_sweep(s);
    ASSERT_EQ(rows.size(), 6u);
    const double counts[] = {1, 3, 6, 10, 15, 21};
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(rows[i].number("step_count"), counts[i]);
        EXPECT_EQ(rows[i].number("enumerated"), counts[i]);
    }
}

TEST(Sweep, BeamVoltageRampIsMonotone) {
    const auto rows = run_sweep(beam_voltage_sweep());
    ASSERT_EQ(rows.size(), 15u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].number("stable"), 1.0);
        EXPECT_LT(rows[i].number("tip_displacement_um"), rows[i - 1].number("tip_displacement_um"));
    }
}

TEST(Sweep, SingletonGrid) {
    SweepSpec s;
    s.subject = SweepSubject::coil;
    s.grid = {{"turns", {15}}};
    s.fixed = {{"area_um2", 4}, {"length_um", 1000}, {"mu_r", 30}};
    const auto rows = run_sweep(s);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].number("inductance_nH"), 0.0339292006588, 1e-12);
}

TEST(Sweep, LexicographicOrderAndRowCount) {
    SweepSpec s;
    s.subject = SweepSubject::coil;
    s.grid = {{"turns", {1, 2, 3}}, {"mu_r", {1, 10}}, {"length_um", {100, 200, 300, 400}}};
    s.fixed = {{"area_um2", 4}};
    const auto rows = run_sweep(s);
    ASSERT_EQ(rows.size(), 24u);
    EXPECT_EQ(rows[0].number("turns"), 1);
    EXPECT_EQ(rows[0].number("length_um"), 100);
    EXPECT_EQ(rows[1].number("length_um"), 200);
    EXPECT_EQ(rows[4].number("mu_r"), 10);
    EXPECT_EQ(rows[8].number("turns"), 2);
    EXPECT_EQ(rows[23].number("turns"), 3);
    EXPECT_EQ(rows[23].number("mu_r"), 10);
    EXPECT_EQ(rows[23].number("length_um"), 400);
}

TEST(Sweep, ThreadedMatchesSerial) {
    SweepSpec s;
    s.subject = SweepSubject::coil;
    s.grid = {{"turns", {1, 5, 9, 13}}, {"length_um", {50, 100, 150, 200, 250}}};
    s.fixed = {{"area_um2", 4}, {"mu_r", 40}};
    std::ostringstream a, b;
    write_csv(run_sweep(s), a);
    s.threads = 4;
    write_csv(run_sweep(s), b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, PointErrorsAreRecorded) {
    SweepSpec s;
    s.subject = SweepSubject::coil;
    s.grid = {{"length_um", {100, -1, 200}}};
    s.fixed = {{"turns", 10}, {"area_um2", 4}};
    const auto rows = run_sweep(s);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].find("error"), nullptr);
    ASSERT_NE(rows[1].find("error"), nullptr);
    EXPECT_NE(rows[1].text("error").find("length"), std::string::npos);
    EXPECT_EQ(rows[2].find("error"), nullptr);

    s.grid = {{"turns", {2.5}}};
    s.fixed = {{"area_um2", 4}, {"length_um", 100}};
    EXPECT_NE(run_sweep(s)[0].find("error"), nullptr);
}

TEST(Sweep, SpecValidation) {
    SweepSpec s;
    s.subject = SweepSubject::steps;
    EXPECT_THROW(run_sweep(s), ValidationError); // empty grid
    s.grid = {{"n", {}}};
    EXPECT_THROW(run_sweep(s), ValidationError);
    s.grid = {{"bogus", {1}}};
    EXPECT_THROW(run_sweep(s), ValidationError);
    s.grid = {{"unit_l_nh", {1}}};
    EXPECT_THROW(run_sweep(s), ValidationError); // n missing
    s.grid = {{"n", {1, 2}}, {"unit_l_nh", {1, 2}}};
    s.max_points = 3;
    EXPECT_THROW(run_sweep(s), ValidationError);
    s.max_points = 4;
    EXPECT_EQ(run_sweep(s).size(), 4u);
}

TEST(Config, ParsesAllSections) {
    const auto cfg = parse_config(R"({
        "materials": [{"name": "Fe", "mu_r": 5000, "resistivity": 1e-7}, {"name": "Permalloy", "mu_r": 8000}],
        "beam": {"length_um": 100, "width_um": 2, "thickness_um": 5, "gap_um": 2,
                 "electrode_area_um2": 1000, "youngs_modulus_gpa": 169, "density": 2330},
        "sweep": {"subject": "beam", "grid": {"voltage": {"start": 1, "stop": 15, "count": 15}},
                  "fixed": {"length_um": 100, "width_um": 2, "thickness_um": 5, "gap_um": 2,
                            "electrode_area_um2": 1000, "youngs_modulus_gpa": 169, "density": 2330}}
    })");
    ASSERT_EQ(cfg.materials.size(), 2u);
    const auto cat = cfg.catalog();
    EXPECT_EQ(cat.lookup("fe").mu_r, 5000.0);
    EXPECT_EQ(cat.lookup("permalloy").mu_r, 8000.0);
    EXPECT_EQ(cat.lookup("Ni").mu_r, 600.0);
    ASSERT_TRUE(cfg.beam.has_value());
    EXPECT_DOUBLE_EQ(cfg.beam->length, 100e-6);
    EXPECT_DOUBLE_EQ(cfg.beam->youngs_modulus, 169e9);
    ASSERT_TRUE(cfg.sweep.has_value());
    ASSERT_EQ(cfg.sweep->grid.size(), 1u);
    EXPECT_EQ(cfg.sweep->grid[0].second.size(), 15u);
    EXPECT_EQ(cfg.sweep->grid[0].second.back(), 15.0);
    EXPECT_EQ(run_sweep(*cfg.sweep).size(), 15u);
}

TEST(Config, GridOrderFollowsFile) {
    const auto cfg = parse_config(R"({"sweep": {"subject": "coil",
        "grid": {"turns": [1, 2], "area_um2": [4, 8, 16]}, "fixed": {"length_um": 100}}})");
    ASSERT_EQ(cfg.sweep->grid.size(), 2u);
    EXPECT_EQ(cfg.sweep->grid[0].first, "turns");
    EXPECT_EQ(cfg.sweep->grid[1].first, "area_um2");
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_config("{not json"), ValidationError);
    EXPECT_THROW(parse_config(R"({"colour": 1})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"materials": [{"name": "x", "mu_r": -2}]})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"beam": {"length_um": 100}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"sweep": {"subject": "plasma", "grid": {"n": [1]}}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"sweep": {"subject": "steps", "grid": {"n": [1]}, "extra": 1}})"), ValidationError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), IoError);
}

TEST(Config, ShippedSamplesLoad) {
    const auto dir = std::filesystem::path(MVI_DATA_DIR).parent_path() / "configs";
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        const auto cfg = load_config(entry.path().string());
        if (cfg.sweep) {
            EXPECT_FALSE(run_sweep(*cfg.sweep).empty()) << entry.path();
        }
        if (cfg.beam) {
            EXPECT_NO_THROW(validate(*cfg.beam)) << entry.path();
        }
        ++seen;
    }
    EXPECT_GE(seen, 3u);
}
