#include "lognls/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "lognls/errors.hpp"

namespace lognls {

namespace {

constexpr char kMagic[8] = {'L', 'O', 'G', 'N', 'L', 'S', '0', '1'};

bool host_little_endian() {
    const std::uint32_t probe = 1;
    unsigned char b;
    std::memcpy(&b, &probe, 1);
    return b == 1;
}

void put_u32(std::string& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.append(b, 4);
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if (!host_little_endian()) {
        std::uint64_t sw = 0;
        for (int i = 0; i < 8; ++i) sw |= ((bits >> (8 * i)) & 0xff) << (8 * (7 - i));
        bits = sw;
    }
    char b[8];
    std::memcpy(b, &bits, 8);
    out.append(b, 8);
}

std::uint32_t get_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

double get_f64(const char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw config_error("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw config_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw config_error("rename failed: " + path);
}

void write_snapshot(const std::string& path, const Field& f, double t) {
    std::string out;
    out.reserve(24 + 16 * f.size());
    out.append(kMagic, 8);
    put_u32(out, static_cast<std::uint32_t>(f.grid.dim));
    put_u32(out, static_cast<std::uint32_t>(f.grid.points));
    put_f64(out, f.grid.half_width);
    put_f64(out, t);
    for (const cplx& v : f.values) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
    }
    write_file_atomic(path, out);
}

Field read_snapshot(const std::string& path, double* t_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open snapshot: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() < 32 || std::memcmp(data.data(), kMagic, 8) != 0)
        throw config_error("bad snapshot header: " + path);
    std::uint32_t dim = get_u32(data.data() + 8);
    std::uint32_t M = get_u32(data.data() + 12);
    double L = get_f64(data.data() + 16);
    double t = get_f64(data.data() + 24);
    Grid g = make_grid(static_cast<int>(dim), L, static_cast<int>(M));
    if (data.size() != 32 + 16 * g.size()) throw config_error("snapshot size mismatch: " + path);
    Field f = make_field(g);
    const char* p = data.data() + 32;
    for (std::size_t i = 0; i < f.size(); ++i, p += 16)
        f.values[i] = cplx(get_f64(p), get_f64(p + 8));
    if (t_out) *t_out = t;
    return f;
}

namespace {

std::string json_array(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    s += ']';
    return s;
}

std::string grid_json(const Grid& g) {
    std::string s = "{\"dim\":" + std::to_string(g.dim) +
                    ",\"half_width\":" + format_double(g.half_width) +
                    ",\"points\":" + std::to_string(g.points) + "}";
    return s;
}

}  // namespace

std::string ground_state_json(const GroundStateResult& r, const Grid& g) {
    std::string s = "{";
    s += "\"omega\":" + format_double(r.omega);
    s += ",\"grid\":" + grid_json(g);
    s += ",\"action_value\":" + format_double(r.action_value);
    s += ",\"d_closed_ref\":" + format_double(r.d_closed_ref);
    s += ",\"converged\":" + std::string(r.converged ? "true" : "false");
    s += ",\"iterations\":" + std::to_string(r.iterations);
    s += ",\"grad_norm\":" + format_double(r.grad_norm);
    s += ",\"elliptic_residual\":" + format_double(r.elliptic_residual_value);
    s += ",\"orbit_distance_l2\":" + format_double(r.orbit_distance_l2);
    s += ",\"theta\":" + format_double(r.theta);
    s += ",\"y\":" + json_array(r.y);
    s += ",\"trace\":[";
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        if (i) s += ',';
        s += "{\"iteration\":" + std::to_string(r.trace[i].iteration) +
             ",\"action\":" + format_double(r.trace[i].action) +
             ",\"nehari_residual\":" + format_double(r.trace[i].nehari_residual) + "}";
    }
    s += "]}";
    return s;
}

std::string stability_json(const StabilityReport& r, const Grid& g) {
    std::string s = "{";
    s += "\"omega\":" + format_double(r.omega);
    s += ",\"grid\":" + grid_json(g);
    s += ",\"spec\":{\"kind\":\"" + r.spec.kind + "\"";
    s += ",\"delta\":" + format_double(r.spec.delta);
    s += ",\"seed\":" + std::to_string(r.spec.seed);
    s += ",\"band_limit\":" + std::to_string(r.spec.band_limit) + "}";
    s += ",\"initial_distance_w\":" + format_double(r.initial_distance_w);
    s += ",\"max_distance_w\":" + format_double(r.max_distance_w);
    s += ",\"polish_drift_flag\":" + std::string(r.polish_drift_flag ? "true" : "false");
    s += ",\"aborted\":" + std::string(r.aborted ? "true" : "false");
    s += ",\"abort_reason\":\"" + r.abort_reason + "\"";
    s += ",\"max_charge_drift\":" + format_double(r.max_charge_drift);
    s += ",\"max_energy_drift\":" + format_double(r.max_energy_drift);
    s += ",\"max_boundary_mass\":" + format_double(r.max_boundary_mass);
    s += ",\"times\":" + json_array(r.times);
    s += ",\"orbit_distance_w\":" + json_array(r.orbit_distance_w);
    s += ",\"orbit_distance_l2\":" + json_array(r.orbit_distance_l2);
    s += ",\"theta\":" + json_array(r.theta);
    s += ",\"y\":[";
    for (std::size_t i = 0; i < r.y.size(); ++i) {
        if (i) s += ',';
        s += json_array(r.y[i]);
    }
    s += "]}";
    return s;
}

std::string trajectory_json(const TrajectoryDiagnostics& d, const Grid& g) {
    std::string s = "{";
    s += "\"omega_ref\":" + format_double(d.omega_ref);
    s += ",\"grid\":" + grid_json(g);
    s += ",\"aborted\":" + std::string(d.aborted ? "true" : "false");
    s += ",\"abort_reason\":\"" + d.abort_reason + "\"";
    s += ",\"max_charge_drift\":" + format_double(d.max_charge_drift());
    s += ",\"max_energy_drift\":" + format_double(d.max_energy_drift());
    s += ",\"max_boundary_mass\":" + format_double(d.max_boundary_mass());
    s += ",\"samples\":" + std::to_string(d.times.size());
    s += "}";
    return s;
}

std::string drift_plot_script(const std::string& csv_name) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key outside\n";
    s += "set logscale y\n";
    s += "set xlabel 't'\n";
    s += "set ylabel 'relative drift'\n";
    s += "set format y '%.1e'\n";
    s += "set terminal pngcairo size 900,600\n";
    s += "set output 'drift.png'\n";
    s += "plot '" + csv_name + "' using 1:($4>0?$4:1e-18) with lines title 'charge drift', \\\n";
    s += "     '" + csv_name + "' using 1:($5>0?$5:1e-18) with lines title 'energy drift'\n";
    return s;
}

std::string distance_plot_script(const std::string& csv_name) {
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key outside\n";
    s += "set xlabel 't'\n";
    s += "set ylabel 'orbit distance'\n";
    s += "set terminal pngcairo size 900,600\n";
    s += "set output 'distance.png'\n";
    s += "plot '" + csv_name + "' using 1:2 with lines title 'W distance', \\\n";
    s += "     '" + csv_name + "' using 1:3 with lines title 'L2 distance'\n";
    return s;
}

}  // namespace lognls
