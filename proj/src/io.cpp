#include "fskjcr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fskjcr/error.hpp"

namespace fskjcr::io {

using nlohmann::json;

namespace {

WaveformSpec spec_from_json(const json& j)
{
    return make_spec(j.at("L").get<int>(), j.at("M").get<int>(), j.value("T_seconds", 1.0),
                     j.value("freq_step_multiple", 1));
}

void spec_to_json(const WaveformSpec& spec, json& j)
{
    j["L"] = spec.num_subpulses;
    j["M"] = spec.mod_order;
    j["T_seconds"] = spec.subpulse_duration;
    j["freq_step_multiple"] = spec.freq_step_multiple;
}

}  // namespace

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json waveform_to_json(const FskWaveform& waveform)
{
    json j;
    spec_to_json(waveform.spec(), j);
    j["freq_indices"] = std::vector<int>(waveform.freq_indices().begin(), waveform.freq_indices().end());
    j["phases_rad"] = std::vector<double>(waveform.phases().begin(), waveform.phases().end());
    return j;
}

FskWaveform waveform_from_json(const json& j)
{
    try {
        const WaveformSpec spec = spec_from_json(j);
        auto freq = j.at("freq_indices").get<std::vector<int>>();
        std::vector<double> phases;
        if (j.contains("phases_rad")) phases = j.at("phases_rad").get<std::vector<double>>();
        return FskWaveform(spec, std::move(freq), std::move(phases));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed waveform JSON: ") + e.what());
    } catch (const DomainError& e) {
        throw InputError(std::string("invalid waveform: ") + e.what());
    }
}

json phase_table_to_json(const PhaseTable& table)
{
    json j;
    spec_to_json(table.spec(), j);
    json entries = json::object();
    for (const auto& [index, phases] : table.entries()) entries[index] = phases;
    j["phases_rad"] = std::move(entries);
    return j;
}

PhaseTable phase_table_from_json(const json& j)
{
    try {
        PhaseTable table(spec_from_json(j));
        for (const auto& [index, phases] : j.at("phases_rad").items())
            table.set(index, phases.get<std::vector<double>>());
        return table;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed phase table JSON: ") + e.what());
    } catch (const DomainError& e) {
        throw InputError(std::string("invalid phase table: ") + e.what());
    }
}

json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("cannot parse " + path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string surface_csv(const AfSurface& surface)
{
    std::ostringstream os;
    os << "tau_seconds,omega_rad_per_s,magnitude\n";
    for (int i = surface.delay_min(); i <= surface.delay_max(); ++i)
        for (int j = -surface.doppler_max(); j <= surface.doppler_max(); ++j)
            os << format_double(surface.tau(i)) << ',' << format_double(surface.omega(j)) << ','
               << format_double(surface.at(i, j)) << '\n';
    return os.str();
}

std::string cut_csv(const std::string& axis_header, const std::vector<double>& axis, const std::vector<double>& values)
{
    std::ostringstream os;
    os << axis_header << ",magnitude\n";
    for (std::size_t i = 0; i < axis.size(); ++i) os << format_double(axis[i]) << ',' << format_double(values[i]) << '\n';
    return os.str();
}

std::string pmf_csv(const DiscreteDistribution& d)
{
    std::ostringstream os;
    os << "value,probability\n";
    for (std::size_t i = 0; i < d.support().size(); ++i)
        os << format_double(d.support()[i]) << ',' << format_double(d.pmf()[i]) << '\n';
    return os.str();
}

std::string cdf_csv(const DiscreteDistribution& d)
{
    std::ostringstream os;
    os << "value,cdf\n";
    const auto F = d.cdf();
    for (std::size_t i = 0; i < F.size(); ++i) os << format_double(d.support()[i]) << ',' << format_double(F[i]) << '\n';
    return os.str();
}

json w1_json(double w1, std::uint64_t n1, std::uint64_t n2) { return {{"w1", w1}, {"n1", n1}, {"n2", n2}}; }

std::string batch_csv(const BatchResult& batch)
{
    std::ostringstream os;
    os << "waveform_index,pre_psl,post_psl,drop,converged,restart_winner\n";
    for (const BatchRow& row : batch.rows)
        os << row.waveform_index << ',' << format_double(row.result.pre_psl) << ',' << format_double(row.result.psl)
           << ',' << format_double(row.result.pre_psl - row.result.psl) << ',' << (row.result.converged ? 1 : 0)
           << ',' << row.result.winning_restart << '\n';
    return os.str();
}

std::string ser_csv(const SerCurve& curve)
{
    std::ostringstream os;
    os << "snr_db,trials,errors,ser,ci95\n";
    for (const SerPoint& p : curve.points)
        os << format_double(p.snr_db) << ',' << p.symbols << ',' << p.errors << ',' << format_double(p.ser) << ','
           << format_double(p.ci95) << '\n';
    return os.str();
}

}  // namespace fskjcr::io
