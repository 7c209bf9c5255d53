#include "fskjcr/phase_table.hpp"

#include <algorithm>

#include "fskjcr/error.hpp"

namespace fskjcr {

void PhaseTable::set(const std::vector<int>& freq_indices, std::vector<double> phases)
{
    set(freq_sequence_to_index_string(spec_, freq_indices), std::move(phases));
}

void PhaseTable::set(const std::string& index, std::vector<double> phases)
{
    // validates the index and the phase vector in one go
    const FskWaveform w(spec_, index_string_to_freq_sequence(spec_, index), std::move(phases));
    const auto p = w.phases();
    // re-derive the key so "010" and "10" land on the same entry
    entries_[freq_sequence_to_index_string(spec_, w.freq_indices())] = std::vector<double>(p.begin(), p.end());
}

const std::vector<double>* PhaseTable::find(std::span<const int> freq_indices) const
{
    return find(freq_sequence_to_index_string(spec_, freq_indices));
}

const std::vector<double>* PhaseTable::find(const std::string& index) const
{
    const auto it = entries_.find(index);
    return it == entries_.end() ? nullptr : &it->second;
}

bool PhaseTable::complete() const
{
    const std::uint64_t count = spec_.waveform_count();
    return count != 0 && entries_.size() == count;
}

std::vector<FskWaveform> PhaseTable::waveforms() const
{
    std::vector<std::pair<std::vector<int>, const std::vector<double>*>> items;
    items.reserve(entries_.size());
    for (const auto& [index, phases] : entries_) items.emplace_back(index_string_to_freq_sequence(spec_, index), &phases);
    // base-M digits with a fixed length compare lexicographically like the index
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<FskWaveform> out;
    out.reserve(items.size());
    for (auto& [freq, phases] : items) out.emplace_back(spec_, std::move(freq), *phases);
    return out;
}

}  // namespace fskjcr
