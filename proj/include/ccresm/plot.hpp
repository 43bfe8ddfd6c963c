#pragma once

#include <string>

#include "ccresm/sim.hpp"

namespace ccresm {

enum class PlotKind { Ber, Per };

// Log-scale error rate versus SNR, one curve per (scheme, delta).  Cells
// with a zero rate have no log-scale position and are skipped.  Throws if
// the result is empty or carries no finite values for the requested kind.
std::string render_plot_svg(const SweepResult& result, PlotKind kind);

void emit_plot(const SweepResult& result, PlotKind kind, const std::string& out_path);

}  // namespace ccresm
