// Scans the joint-constraint bound across a band around resonance and prints
// the tightest point, for each built-in preset.
#include <cmath>
#include <cstdio>

#include "optogup/optogup.hpp"

using namespace optogup;

int main()
{
    const auto lib = io::PresetLibrary::with_builtins();
    for (const auto& [name, entry] : lib.entries()) {
        const ExperimentParams& e = entry.params;
        const auto grid = make_grid(0.5 * e.Omega, 2 * e.Omega, 301, true);
        try {
            const BoundScan s = bound_scan(e, grid, Constraint{}, LedgerMode::exact);
            const ScanPoint& p = s.points[s.argmin];
            std::printf("%-8s omega=%.4e  alpha0<=%.3e  gamma0<=%.3e  (%zu of %zu points unbounded)\n", name.c_str(),
                        p.omega, p.report->alpha0_max, p.report->gamma0_max, s.gaps, grid.size());
        } catch (const EmptyResultError&) {
            std::printf("%-8s no bound anywhere in [Omega/2, 2 Omega]\n", name.c_str());
        }
    }
}
