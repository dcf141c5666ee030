#include "cryoswitch/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "cryoswitch/errors.hpp"

namespace cryoswitch {

namespace {

void read_fields(const json& j, const std::string& path, const std::map<std::string, double*>& fields) {
    if (!j.is_object()) throw config_error(path + ": expected an object");
    for (const auto& [key, val] : j.items()) {
        auto it = fields.find(key);
        if (it == fields.end()) throw config_error(path + "." + key + ": unknown field");
        if (!val.is_number()) throw config_error(path + "." + key + ": expected a number");
        *it->second = val.get<double>();
    }
}

}  // namespace

SwitchParams params_from_json(const json& j, SwitchParams p, const std::string& path) {
    read_fields(j, path,
                {{"mass_eff", &p.mass_eff},
                 {"stiffness", &p.stiffness},
                 {"gap_actuation_295", &p.gap_actuation_295},
                 {"gap_contact_295", &p.gap_contact_295},
                 {"lever_ratio", &p.lever_ratio},
                 {"electrode_area", &p.electrode_area},
                 {"gate_capacitance_closed", &p.gate_capacitance_closed},
                 {"r_on_295", &p.r_on_295},
                 {"r_off_dc", &p.r_off_dc},
                 {"c_off", &p.c_off},
                 {"contact_stiffness", &p.contact_stiffness},
                 {"contact_damping", &p.contact_damping},
                 {"struct_damping", &p.struct_damping},
                 {"gas_damping_ref", &p.gas_damping_ref},
                 {"thermal_gap_shift_max", &p.thermal_gap_shift_max},
                 {"squeeze_film_standoff", &p.squeeze_film_standoff}});
    try {
        validate(p);
    } catch (const validation_error& e) {
        throw config_error(path + ": " + e.what());
    }
    return p;
}

json to_json(const SwitchParams& p) {
    return {{"mass_eff", p.mass_eff},
            {"stiffness", p.stiffness},
            {"gap_actuation_295", p.gap_actuation_295},
            {"gap_contact_295", p.gap_contact_295},
            {"lever_ratio", p.lever_ratio},
            {"electrode_area", p.electrode_area},
            {"gate_capacitance_closed", p.gate_capacitance_closed},
            {"r_on_295", p.r_on_295},
            {"r_off_dc", p.r_off_dc},
            {"c_off", p.c_off},
            {"contact_stiffness", p.contact_stiffness},
            {"contact_damping", p.contact_damping},
            {"struct_damping", p.struct_damping},
            {"gas_damping_ref", p.gas_damping_ref},
            {"thermal_gap_shift_max", p.thermal_gap_shift_max},
            {"squeeze_film_standoff", p.squeeze_film_standoff}};
}

Environment environment_from_json(const json& j, Environment e, const std::string& path) {
    read_fields(j, path,
                {{"temperature", &e.temperature},
                 {"pressure_ref", &e.pressure_ref},
                 {"t_condense_o2", &e.t_condense_o2},
                 {"t_condense_n2", &e.t_condense_n2},
                 {"o2_fraction", &e.o2_fraction},
                 {"residual_pressure_fraction", &e.residual_pressure_fraction},
                 {"mean_free_path_ref", &e.mean_free_path_ref}});
    try {
        validate(e);
    } catch (const validation_error& ex) {
        throw config_error(path + ": " + ex.what());
    }
    return e;
}

json to_json(const Environment& e) {
    return {{"temperature", e.temperature},
            {"pressure_ref", e.pressure_ref},
            {"t_condense_o2", e.t_condense_o2},
            {"t_condense_n2", e.t_condense_n2},
            {"o2_fraction", e.o2_fraction},
            {"residual_pressure_fraction", e.residual_pressure_fraction},
            {"mean_free_path_ref", e.mean_free_path_ref}};
}

Waveform waveform_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw config_error(path + ": expected an object");
    Waveform w;
    for (const auto& [key, val] : j.items()) {
        if (key == "segments") {
            if (!val.is_array()) throw config_error(path + ".segments: expected an array");
            for (size_t i = 0; i < val.size(); ++i) {
                Segment s;
                read_fields(val[i], path + ".segments[" + std::to_string(i) + "]",
                            {{"voltage", &s.voltage}, {"duration", &s.duration}});
                w.segments.push_back(s);
            }
        } else if (key == "period") {
            if (!val.is_number()) throw config_error(path + ".period: expected a number");
            w.period = val.get<double>();
        } else if (key == "repetitions") {
            if (!val.is_number_integer()) throw config_error(path + ".repetitions: expected an integer");
            w.repetitions = val.get<int>();
        } else {
            throw config_error(path + "." + key + ": unknown field");
        }
    }
    try {
        validate(w);
    } catch (const validation_error& e) {
        throw config_error(path + ": " + e.what());
    }
    return w;
}

json to_json(const Waveform& w) {
    json segs = json::array();
    for (const auto& s : w.segments) segs.push_back({{"voltage", s.voltage}, {"duration", s.duration}});
    return {{"segments", segs}, {"period", w.period}, {"repetitions", w.repetitions}};
}

EngineeredSpec spec_from_json(const json& j, EngineeredSpec s, const std::string& path) {
    read_fields(j, path,
                {{"v_kick", &s.v_kick},
                 {"t_kick", &s.t_kick},
                 {"v_coast", &s.v_coast},
                 {"t_coast", &s.t_coast},
                 {"v_hold", &s.v_hold},
                 {"t_hold", &s.t_hold},
                 {"v_release_coast", &s.v_release_coast},
                 {"t_release_coast", &s.t_release_coast},
                 {"v_catch", &s.v_catch},
                 {"t_catch", &s.t_catch}});
    return s;
}

json to_json(const EngineeredSpec& s) {
    return {{"v_kick", s.v_kick},   {"t_kick", s.t_kick},
            {"v_coast", s.v_coast}, {"t_coast", s.t_coast},
            {"v_hold", s.v_hold},   {"t_hold", s.t_hold},
            {"v_release_coast", s.v_release_coast}, {"t_release_coast", s.t_release_coast},
            {"v_catch", s.v_catch}, {"t_catch", s.t_catch}};
}

ObjectiveWeights weights_from_json(const json& j, ObjectiveWeights w, const std::string& path) {
    read_fields(j, path,
                {{"impact", &w.impact},
                 {"bounce", &w.bounce},
                 {"settle", &w.settle},
                 {"budget", &w.budget},
                 {"t_budget", &w.t_budget}});
    return w;
}

json to_json(const ObjectiveWeights& w) {
    return {{"impact", w.impact}, {"bounce", w.bounce}, {"settle", w.settle},
            {"budget", w.budget}, {"t_budget", w.t_budget}};
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json read_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write " + path);
    out << text;
    if (!out) throw config_error("write failed for " + path);
}

std::string format_double(double x) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += '\n';
    for (const auto& r : rows) {
        for (size_t i = 0; i < r.size(); ++i) {
            if (i) s += ',';
            s += format_double(r[i]);
        }
        s += '\n';
    }
    return s;
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

}  // namespace cryoswitch
