#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "optogup/optogup.hpp"

using namespace optogup;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag)
{
    const fs::path p = fs::temp_directory_path() / ("optogup_io_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) { return io::detail::read_file(p.string()); }

const char* teufel_inline = R"(inline.name = teufel
inline.T = 4e-2
inline.Omega = 5.88e7
inline.rho = 1.53e2
inline.Q = 3.83e5
inline.nu = 6.71e9
inline.L = 4e-8
inline.kappa = 6.64e7
inline.m = 8.5e-14
inline.P = 7.8e-9
inline.F_quoted = 3.55e8
inline.S_min = 1e-26
)";

} // namespace

TEST(Presets, BuiltinsMatchTables)
{
    const auto lib = io::PresetLibrary::with_builtins();
    ASSERT_EQ(lib.entries().size(), 3u);
    const ExperimentParams a{"aligo", 300.0, 4.15, 1e-6, 1.33e9, 2.82e14, 4e3, 4.78e3, 10.0, 3.6e3, 49.2, 9e-40};
    const ExperimentParams p{"purdy", 1.7e-3, 9.75e6, 8.98e3, 1.08e3, 2.82e14, 5.1e-3, 5.59e6, 7e-12, 9.4e-5,
                             3.3e4, 4.4e-32};
    const ExperimentParams t{"teufel", 4e-2, 5.88e7, 1.53e2, 3.83e5, 6.71e9, 4e-8, 6.64e7, 8.5e-14, 7.8e-9,
                             3.55e8, 1e-26};
    EXPECT_EQ(lib.get("aligo"), a);
    EXPECT_EQ(lib.get("purdy"), p);
    EXPECT_EQ(lib.get("teufel"), t);
    EXPECT_THROW(lib.get("virgo"), ConfigError);
}

TEST(Presets, UserFilesExtendButNeverMutate)
{
    auto lib = io::PresetLibrary::with_builtins();
    io::load_presets_text(lib, "[bench]\nT = 1\nOmega = 10\nrho = 1\nnu = 1e14\nL = 1\nkappa = 100\nm = 1\nP = 0\n",
                          "mem");
    EXPECT_TRUE(lib.contains("bench"));
    EXPECT_DOUBLE_EQ(lib.get("bench").Q, 10.0);
    EXPECT_FALSE(lib.entries().at("bench").builtin);
    EXPECT_THROW(io::load_presets_text(lib,
                                       "[aligo]\nT = 1\nOmega = 10\nrho = 1\nnu = 1e14\nL = 1\nkappa = 100\nm = 1\nP = 0\n",
                                       "mem"),
                 ValidationError);
    EXPECT_THROW(io::load_presets_text(lib, "T = 1\n", "mem"), ParseError);
    EXPECT_THROW(io::load_presets_text(lib, "[x]\nT = 1\nwidth = 2\n", "mem"), ParseError);
}

TEST(Config, MinimalFileGetsDefaults)
{
    const io::RunConfig c = io::parse_config("preset = aligo\nalpha0 = 0\ngamma0 = 0\n");
    EXPECT_EQ(*c.preset, "aligo");
    EXPECT_EQ(c.alpha0, 0);
    EXPECT_EQ(c.mode, LedgerMode::exact);
    ASSERT_EQ(c.constraints.size(), 1u);
    EXPECT_EQ(c.constraints[0].kind, ConstraintKind::joint);
    EXPECT_EQ(c.constraints[0].c, 3.5);
    EXPECT_EQ(c.grid.points, 200u);
    EXPECT_TRUE(c.grid.log_scale);
}

TEST(Config, StrictParsing)
{
    try {
        io::parse_config("preset = aligo\n# comment\ngrid.pionts = 3\n");
        FAIL() << "unknown key accepted";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 3);
        EXPECT_EQ(e.field, "grid.pionts");
    }
    EXPECT_THROW(io::parse_config("preset = aligo\npreset = purdy\n"), ParseError);
    EXPECT_THROW(io::parse_config("preset = aligo\nalpha0 = 1e10x\n"), ParseError);
    EXPECT_THROW(io::parse_config("preset = aligo\nledger = fast\n"), ParseError);
    EXPECT_THROW(io::parse_config("preset aligo\n"), ParseError);
    EXPECT_THROW(io::parse_config("[run]\npreset = aligo\n"), ParseError);
    EXPECT_THROW(io::parse_config("alpha0 = 1\n"), ValidationError);
    EXPECT_THROW(io::parse_config(std::string("preset = aligo\n") + teufel_inline), ValidationError);
    EXPECT_THROW(io::parse_config("preset = aligo\ngrid.min = 5\ngrid.max = 1\n"), ValidationError);
    EXPECT_NO_THROW(io::parse_config("verify.tier = full\n", false));
}

TEST(Config, OverdampedInlineExperimentNamesInvariant)
{
    try {
        io::parse_config("inline.T = 1\ninline.Omega = 10\ninline.rho = 25\ninline.nu = 1e14\ninline.L = 1\n"
                         "inline.kappa = 100\ninline.m = 1\ninline.P = 0\n");
        FAIL() << "overdamped experiment accepted";
    } catch (const ValidationError& e) {
        EXPECT_NE(e.invariant.find("underdamped"), std::string::npos);
    }
}

TEST(Config, InlineTeufelEqualsBuiltin)
{
    const io::RunConfig c = io::parse_config(teufel_inline);
    ASSERT_TRUE(c.inline_params.has_value());
    EXPECT_EQ(*c.inline_params, io::PresetLibrary::with_builtins().get("teufel"));
}

TEST(Config, CommandLineSettingsReplaceInPlace)
{
    const std::string merged = io::merge_overrides("preset = aligo\n# x\ngrid.points = 10\n",
                                                   {"grid.points=20", "ledger=white"});
    EXPECT_EQ(merged, "preset = aligo\n# x\ngrid.points = 20\nledger = white\n");
    const io::RunConfig c = io::parse_config(merged);
    EXPECT_EQ(c.grid.points, 20u);
    EXPECT_EQ(c.mode, LedgerMode::white_noise);
    EXPECT_THROW(io::merge_overrides("", {"novalue"}), ParseError);
    EXPECT_THROW(io::merge_overrides("", {"a=1", "a=2"}), ParseError);
}

TEST(Config, EnvironmentOverridesOnlyOutputAndThreads)
{
    io::RunConfig c = io::parse_config("preset = aligo\noutput_dir = here\nthreads = 2\n");
    ::setenv("OPTOGUP_OUTPUT_DIR", "/tmp/elsewhere", 1);
    ::setenv("OPTOGUP_THREADS", "5", 1);
    ::setenv("OPTOGUP_LEDGER", "white", 1);
    io::apply_env_overrides(c);
    EXPECT_EQ(c.output_dir, "/tmp/elsewhere");
    EXPECT_EQ(c.threads, 5u);
    EXPECT_EQ(c.mode, LedgerMode::exact);
    ::setenv("OPTOGUP_THREADS", "many", 1);
    EXPECT_THROW(io::apply_env_overrides(c), ConfigError);
    ::unsetenv("OPTOGUP_OUTPUT_DIR");
    ::unsetenv("OPTOGUP_THREADS");
    ::unsetenv("OPTOGUP_LEDGER");
}

TEST(Config, SampleFilesParse)
{
    for (const char* f : {"aligo_spectrum.cfg", "bounds_all.cfg", "inline_teufel.cfg"})
        EXPECT_NO_THROW(io::load_config(std::string(OPTOGUP_SAMPLES_DIR) + "/" + f)) << f;
    EXPECT_NO_THROW(io::load_config(std::string(OPTOGUP_SAMPLES_DIR) + "/verify_full.cfg", false));
    auto lib = io::PresetLibrary::with_builtins();
    EXPECT_NO_THROW(io::load_presets_text(lib, slurp(std::string(OPTOGUP_SAMPLES_DIR) + "/extra_presets.txt"), "x"));
}

TEST(Csv, RoundTripIsExact)
{
    const auto e = io::PresetLibrary::with_builtins().get("purdy");
    const SpectrumSeries s = spectrum_series(make_grid(1e6, 1e8, 97, true), gup_convert(1e18, 3.5e36), e,
                                             LedgerMode::exact);
    const io::SpectrumTable t = io::parse_spectrum_csv(io::spectrum_csv(s));
    EXPECT_EQ(t.omega, s.omega_grid);
    EXPECT_EQ(t.s0, s.s0);
    EXPECT_EQ(t.delta_s, s.delta_s);
    EXPECT_EQ(t.total, s.total);
    EXPECT_THROW(io::parse_spectrum_csv("omega,s0\n"), ParseError);
    EXPECT_THROW(io::parse_spectrum_csv(std::string(io::spectrum_csv_header) + "\n1,2,3\n"), ParseError);
}

TEST(Json, BoundsRoundTripIsExact)
{
    io::RunConfig c = io::parse_config("bounds.presets = aligo, purdy, teufel\nconstraint = both\n", false);
    const auto entries = io::collect_bounds(c, io::PresetLibrary::with_builtins());
    ASSERT_EQ(entries.size(), 6u);
    const nlohmann::json j = io::bounds_json(entries);
    const nlohmann::json back = nlohmann::json::parse(j.dump(2));
    EXPECT_EQ(back["schema"], io::bounds_schema);
    EXPECT_EQ(back["schema_version"], io::schema_version);
    EXPECT_EQ(back["constants"]["hbar"].get<double>(), codata2018.hbar);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& x = back["entries"][i];
        EXPECT_EQ(x["c_alpha"].get<double>(), entries[i].c_alpha);
        EXPECT_EQ(x["c_gamma"].get<double>(), entries[i].c_gamma);
        EXPECT_EQ(x["s0_m2_per_hz"].get<double>(), entries[i].s0_at);
        if (entries[i].report) {
            EXPECT_EQ(x["status"], "bounded");
            EXPECT_EQ(x["alpha0_max"].get<double>(), entries[i].report->alpha0_max);
            EXPECT_EQ(x["gamma0_max"].get<double>(), entries[i].report->gamma0_max);
        } else {
            EXPECT_EQ(x["status"], "unbounded");
        }
    }
    // Both solver paths are present for every preset.
    EXPECT_EQ(back["entries"][0]["constraint"], "joint");
    EXPECT_EQ(back["entries"][1]["constraint"], "gamma_only");
}

TEST(Commands, ForcedZeroGammaCoefficientIsUnboundedNotAnError)
{
    const fs::path dir = scratch_dir("unbounded");
    io::RunConfig c = io::parse_config("preset = aligo\nconstraint = gamma_only\nbounds.force_c_gamma = 0\n");
    c.output_dir = dir.string();
    std::ostringstream os;
    EXPECT_EQ(io::cmd_bounds(c, os), 0);
    const auto j = nlohmann::json::parse(slurp(dir / "bounds.json"));
    EXPECT_EQ(j["entries"][0]["status"], "unbounded");
    EXPECT_EQ(j["entries"][0]["c_gamma"].get<double>(), 0.0);
    fs::remove_all(dir);
}

TEST(Commands, SpectrumIsByteIdenticalAcrossRuns)
{
    const fs::path dir = scratch_dir("spectrum");
    io::RunConfig c = io::parse_config("preset = aligo\nalpha0 = 1e10\ngamma0 = 3.5e20\ngrid.min = 1\n"
                                       "grid.max = 20\ngrid.points = 300\ngrid.scale = linear\n");
    c.output_dir = dir.string();
    std::ostringstream a, b;
    ASSERT_EQ(io::cmd_spectrum(c, a), 0);
    const std::string first = slurp(dir / "spectrum.csv");
    ASSERT_EQ(io::cmd_spectrum(c, b), 0);
    EXPECT_EQ(first, slurp(dir / "spectrum.csv"));
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(first.substr(0, first.find('\n')), io::spectrum_csv_header);
    fs::remove_all(dir);
}

TEST(Commands, AligoPerturbationChangesSignNearResonance)
{
    const auto e = io::PresetLibrary::with_builtins().get("aligo");
    const SpectrumSeries s = spectrum_series(make_grid(1, 20, 400, false), gup_convert(1e10, 3.5e20), e,
                                             LedgerMode::exact);
    const auto x = io::sign_crossovers(s);
    ASSERT_FALSE(x.empty());
    double nearest = 1e300;
    for (double w : x) nearest = std::min(nearest, std::abs(w - e.Omega));
    EXPECT_LT(nearest, 0.1 * e.Omega);
}

TEST(Commands, VerifySummaryJson)
{
    io::VerifySummary v;
    v.tier = "fast";
    v.seed = 3;
    v.checks.push_back({"a", io::CheckStatus::pass, 1e-12, 1e-10, "x", 0.5});
    v.checks.push_back({"b", io::CheckStatus::info, 2.0, std::nan(""), "y", 0.1});
    EXPECT_TRUE(v.all_pass());
    const auto j = io::verify_json(v);
    EXPECT_EQ(j["schema"], io::verify_schema);
    EXPECT_EQ(j["checks"][1]["status"], "INFO");
    EXPECT_FALSE(j["checks"][0].contains("seconds"));
    v.checks.push_back({"c", io::CheckStatus::fail, 1, 0, "", 0});
    EXPECT_FALSE(v.all_pass());
    EXPECT_EQ(io::format_check_line(v.checks[2]).substr(0, 4), "FAIL");
}

TEST(Commands, PresetsListing)
{
    std::ostringstream os;
    EXPECT_EQ(io::cmd_presets(io::PresetLibrary::with_builtins(), os), 0);
    for (const char* n : {"aligo", "purdy", "teufel"}) EXPECT_NE(os.str().find(n), std::string::npos);
}
