#pragma once

// File formats: waveform and phase-table JSON, CSV exports. Floats are
// written with 12 significant digits so reruns are byte-identical.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fskjcr/ambiguity.hpp"
#include "fskjcr/comms_sim.hpp"
#include "fskjcr/phase_optimizer.hpp"
#include "fskjcr/phase_table.hpp"
#include "fskjcr/sidelobe_stats.hpp"

namespace fskjcr::io {

// Thrown for unreadable or malformed input files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_double(double v);

// {"L", "M", "T_seconds", "freq_step_multiple", "freq_indices", "phases_rad"};
// phases may be omitted (all zero).
nlohmann::json waveform_to_json(const FskWaveform& waveform);
FskWaveform waveform_from_json(const nlohmann::json& j);

// {"L", "M", "T_seconds", "freq_step_multiple", "phases_rad": {index: [...]}}
nlohmann::json phase_table_to_json(const PhaseTable& table);
PhaseTable phase_table_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

// "tau_seconds,omega_rad_per_s,magnitude", both delay halves.
std::string surface_csv(const AfSurface& surface);
std::string cut_csv(const std::string& axis_header, const std::vector<double>& axis, const std::vector<double>& values);
std::string pmf_csv(const DiscreteDistribution& d);
std::string cdf_csv(const DiscreteDistribution& d);
nlohmann::json w1_json(double w1, std::uint64_t n1, std::uint64_t n2);
std::string batch_csv(const BatchResult& batch);
std::string ser_csv(const SerCurve& curve);

}  // namespace fskjcr::io
