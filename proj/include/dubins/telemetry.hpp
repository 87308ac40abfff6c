#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "simulation.hpp"

namespace dubins {

// Column set of the trajectory CSV. Bump the version when it changes.
inline constexpr int kTrajectoryCsvVersion = 1;
inline constexpr std::array<const char*, 20> kTrajectoryColumns = {
    "t",        "x",          "y",          "x_ref",   "y_ref",   "psi",     "psi_ref",
    "u2",       "u2_sat",     "delta_sat",  "theta_hat", "lambda_hat", "e_I_re", "e_I_im",
    "e_r_re",   "e_r_im",     "e_v_re",     "e_v_im",  "V_lyap",  "cross_track"};

namespace detail {

// 17 significant digits: parses back to the identical double.
inline void put_double(std::string& out, double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    out.append(buf, r.ptr);
}

inline std::array<double, 20> record_fields(const TrajectoryRecord& r) {
    return {r.t,        r.x,          r.y,           r.x_ref,        r.y_ref,        r.psi,         r.psi_ref,
            r.u2,       r.u2_sat,     r.delta_sat,   r.theta_hat,    r.lambda_hat,   r.e_I.real(),  r.e_I.imag(),
            r.e_r.real(), r.e_r.imag(), r.e_v.real(), r.e_v.imag(),  r.V_lyap,       r.cross_track};
}

}  // namespace detail

inline void write_csv(const std::vector<TrajectoryRecord>& log, std::ostream& os) {
    std::string line;
    for (std::size_t i = 0; i < kTrajectoryColumns.size(); ++i) {
        if (i) line += ',';
        line += kTrajectoryColumns[i];
    }
    line += '\n';
    os << line;
    for (const auto& r : log) {
        line.clear();
        const auto f = detail::record_fields(r);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i) line += ',';
            detail::put_double(line, f[i]);
        }
        line += '\n';
        os << line;
    }
}

inline void emit_csv(const std::vector<TrajectoryRecord>& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_csv(log, out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::vector<TrajectoryRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("trajectory CSV is empty");
    std::string header;
    for (std::size_t i = 0; i < kTrajectoryColumns.size(); ++i) header += (i ? "," : "") + std::string(kTrajectoryColumns[i]);
    if (line != header) throw IoError("unexpected trajectory CSV header");
    std::vector<TrajectoryRecord> log;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 20> f{};
        const char* p = line.data();
        const char* end = p + line.size();
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto r = std::from_chars(p, end, f[i]);
            if (r.ec != std::errc()) throw IoError("malformed trajectory CSV row " + std::to_string(log.size() + 1));
            p = r.ptr;
            if (i + 1 < f.size()) {
                if (p == end || *p != ',') throw IoError("short trajectory CSV row " + std::to_string(log.size() + 1));
                ++p;
            }
        }
        TrajectoryRecord r;
        r.t = f[0];
        r.x = f[1];
        r.y = f[2];
        r.x_ref = f[3];
        r.y_ref = f[4];
        r.psi = f[5];
        r.psi_ref = f[6];
        r.u2 = f[7];
        r.u2_sat = f[8];
        r.delta_sat = f[9];
        r.theta_hat = f[10];
        r.lambda_hat = f[11];
        r.e_I = {f[12], f[13]};
        r.e_r = {f[14], f[15]};
        r.e_v = {f[16], f[17]};
        r.V_lyap = f[18];
        r.cross_track = f[19];
        log.push_back(r);
    }
    return log;
}

inline std::vector<TrajectoryRecord> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_csv(in);
}

}  // namespace dubins
