#pragma once

#include <cstddef>
#include <string>

#include "stvmd/types.hpp"

namespace stvmd {

// Throws Error{BadWindow, WindowTooLong, BadModeCount, BadConfig, NonFinite,
// CustomLengthMismatch}.
CheckedConfig validate_config(const DecompositionConfig& config, const MultichannelSignal& signal);

// Checks only the signal-independent fields.
void validate_config_fields(const DecompositionConfig& config);

// Initial central frequencies. UniformHalfBand places mode k at 0.5*k/K,
// so the residual (k = 0) starts and stays at 0. num_windows == 0 gives a
// static state; otherwise the vector is replicated across the windows.
FrequencyState init_frequencies(const DecompositionConfig& config, std::size_t num_windows = 0);

// Flat `key = value` text, one field per line, keys named after the struct
// fields. Doubles are written in shortest round-trip form.
std::string format_config(const DecompositionConfig& config);
DecompositionConfig parse_config(const std::string& text, DecompositionConfig base = {});
DecompositionConfig load_config_file(const std::string& path, DecompositionConfig base = {});

}  // namespace stvmd
