#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "optogup/optogup.hpp"

namespace io = optogup::io;

int main(int argc, char** argv)
{
    CLI::App app{"Optomechanical displacement-noise spectra under a modified commutator"};
    app.require_subcommand(1);

    std::string config_path, preset, presets_file;
    std::vector<std::string> settings;
    auto common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("-p,--preset", preset, "experiment preset (same as --set preset=NAME)");
        sub->add_option("-s,--set", settings, "override one config key, KEY=VALUE (repeatable)");
    };
    auto* spectrum = app.add_subcommand("spectrum", "write S0, delta S and their sum on a frequency grid");
    auto* bounds = app.add_subcommand("bounds", "solve for the largest admissible deformation parameters");
    auto* verify = app.add_subcommand("verify", "run the oracle suites and report every check");
    auto* presets = app.add_subcommand("presets", "list built-in and user presets");
    for (auto* s : {spectrum, bounds, verify}) common(s);
    std::string tier;
    verify->add_option("--tier", tier, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    presets->add_option("--presets-file", presets_file, "extra presets file")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets->parsed()) {
            io::PresetLibrary lib = io::PresetLibrary::with_builtins();
            if (!presets_file.empty()) io::load_presets_text(lib, io::detail::read_file(presets_file), presets_file);
            return io::cmd_presets(lib, std::cout);
        }
        if (!preset.empty()) settings.push_back("preset=" + preset);
        if (!tier.empty()) settings.push_back("verify.tier=" + tier);
        const std::string text = config_path.empty() ? std::string{} : io::detail::read_file(config_path);
        io::RunConfig cfg = io::parse_config(io::merge_overrides(text, settings), !verify->parsed());
        io::apply_env_overrides(cfg);
        if (spectrum->parsed()) return io::cmd_spectrum(cfg, std::cout);
        if (bounds->parsed()) return io::cmd_bounds(cfg, std::cout);
        return io::cmd_verify(cfg, std::cout);
    } catch (const optogup::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const optogup::ValidationError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
