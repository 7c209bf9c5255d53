#pragma once

// Optimized initial-phase sequences keyed by waveform index (decimal string,
// so families with M^L beyond 64 bits still have stable keys).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fskjcr/waveform.hpp"

namespace fskjcr {

class PhaseTable {
public:
    explicit PhaseTable(WaveformSpec spec) : spec_(spec) {}

    const WaveformSpec& spec() const { return spec_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // Phases must have length L; they are wrapped onto [0, 2*pi).
    void set(const std::vector<int>& freq_indices, std::vector<double> phases);
    void set(const std::string& index, std::vector<double> phases);

    const std::vector<double>* find(std::span<const int> freq_indices) const;
    const std::vector<double>* find(const std::string& index) const;

    // True when every one of the M^L waveforms has an entry.
    bool complete() const;

    // Entries in ascending numeric index order.
    std::vector<FskWaveform> waveforms() const;

    const std::map<std::string, std::vector<double>>& entries() const { return entries_; }

private:
    WaveformSpec spec_;
    std::map<std::string, std::vector<double>> entries_;
};

}  // namespace fskjcr
