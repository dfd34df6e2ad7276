#pragma once

#include <map>
#include <string>
#include <vector>

#include "optogup/model.hpp"

namespace optogup::io {

struct PresetEntry {
    ExperimentParams params;
    std::string source;
    bool builtin = false;
};

// Built-in rows are fixed; user rows may add names but never replace them.
class PresetLibrary {
public:
    static PresetLibrary with_builtins()
    {
        PresetLibrary lib;
        for (auto& e : builtin_rows()) lib.entries_.emplace(e.params.name, e);
        return lib;
    }

    static std::vector<PresetEntry> builtin_rows()
    {
        //               name      T       Omega   rho     Q       nu       L       kappa   m        P       F       S_min
        return {
            {{"aligo", 300.0, 4.15, 1e-6, 1.33e9, 2.82e14, 4e3, 4.78e3, 10.0, 3.6e3, 49.2, 9e-40},
             "Advanced LIGO single-arm oscillator (aLIGO parameter table)", true},
            {{"purdy", 1.7e-3, 9.75e6, 8.98e3, 1.08e3, 2.82e14, 5.1e-3, 5.59e6, 7e-12, 9.4e-5, 3.3e4, 4.4e-32},
             "Purdy et al., silicon nitride membrane in a Fabry-Perot cavity (tabletop table, column 1)", true},
            {{"teufel", 4e-2, 5.88e7, 1.53e2, 3.83e5, 6.71e9, 4e-8, 6.64e7, 8.5e-14, 7.8e-9, 3.55e8, 1e-26},
             "Teufel et al., LC microwave cavity (tabletop table, column 2)", true},
        };
    }

    void add(const ExperimentParams& p, const std::string& source)
    {
        auto it = entries_.find(p.name);
        if (it != entries_.end() && it->second.builtin)
            throw ValidationError("preset '" + p.name + "' is built in", "built-in presets are immutable");
        validate(p);
        entries_[p.name] = PresetEntry{p, source, false};
    }

    bool contains(const std::string& name) const { return entries_.count(name) != 0; }

    const ExperimentParams& get(const std::string& name) const
    {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw ConfigError("unknown preset '" + name + "'");
        return it->second.params;
    }

    const std::map<std::string, PresetEntry>& entries() const { return entries_; }

private:
    std::map<std::string, PresetEntry> entries_;
};

} // namespace optogup::io
