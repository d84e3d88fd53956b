#ifndef DHROM_IO_HPP
#define DHROM_IO_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhrom/fom.hpp"
#include "dhrom/rom.hpp"

namespace dhrom {

namespace detail {

inline std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void fnv_mix(std::uint64_t& hash, const std::string& text) {
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    hash ^= '|';
    hash *= 1099511628211ull;
}

}  // namespace detail

// Stable hash over all physically relevant config fields; guards transfer
// functions against reuse with a different pipe.
inline std::string config_fingerprint(const PipeConfig& c) {
    std::uint64_t hash = 14695981039346656037ull;
    for (double v :
         {c.geometry.length, c.geometry.r_w, c.geometry.r_s, c.geometry.r_i, c.geometry.r_c,
          c.geometry.depth, c.geometry.roughness, c.fluid.density, c.fluid.heat_capacity,
          c.fluid.conductivity, c.fluid.viscosity, c.steel.density, c.steel.heat_capacity,
          c.steel.conductivity, c.insulation.density, c.insulation.heat_capacity,
          c.insulation.conductivity, c.casing.density, c.casing.heat_capacity,
          c.casing.conductivity, c.soil_conductivity, c.velocity,
          static_cast<double>(c.field_count), c.external_film})
        detail::fnv_mix(hash, detail::format_full(v));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

inline void save_transfer_function(std::ostream& out, const TransferFunction& tf,
                                   const std::string& fingerprint) {
    out << "dhrom-transfer-function 1\n";
    out << "kind " << (tf.kind == TransferFunction::Kind::Inlet ? "inlet" : "ground") << "\n";
    out << "fingerprint " << fingerprint << "\n";
    out << "order " << tf.spectrum.order() << "\n";
    out << "tau " << detail::format_full(tf.spectrum.map.tau) << "\n";
    out << "t_max " << detail::format_full(tf.spectrum.map.t_max) << "\n";
    for (double c : tf.spectrum.coefficients) out << detail::format_full(c) << "\n";
}

inline void save_transfer_function(const std::string& path, const TransferFunction& tf,
                                   const std::string& fingerprint) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    save_transfer_function(out, tf, fingerprint);
}

struct StoredTransferFunction {
    TransferFunction tf;
    std::string fingerprint;
};

inline StoredTransferFunction load_transfer_function(std::istream& in) {
    std::string token;
    int version = 0;
    in >> token >> version;
    if (token != "dhrom-transfer-function" || version != 1)
        throw std::runtime_error("not a dhrom transfer-function file");
    StoredTransferFunction stored;
    std::string kind;
    in >> token >> kind;
    if (token != "kind" || (kind != "inlet" && kind != "ground"))
        throw std::runtime_error("malformed transfer-function file (kind)");
    stored.tf.kind =
        kind == "inlet" ? TransferFunction::Kind::Inlet : TransferFunction::Kind::Ground;
    in >> token >> stored.fingerprint;
    if (token != "fingerprint") throw std::runtime_error("malformed file (fingerprint)");
    int order = -1;
    in >> token >> order;
    if (token != "order" || order < 2) throw std::runtime_error("malformed file (order)");
    double tau = 0, t_max = 0;
    in >> token >> tau;
    if (token != "tau") throw std::runtime_error("malformed file (tau)");
    in >> token >> t_max;
    if (token != "t_max") throw std::runtime_error("malformed file (t_max)");
    stored.tf.spectrum.map = TimeMap{tau, t_max, order};
    stored.tf.spectrum.coefficients.resize(order + 1);
    for (double& c : stored.tf.spectrum.coefficients)
        if (!(in >> c)) throw std::runtime_error("malformed file (coefficients)");
    return stored;
}

inline StoredTransferFunction load_transfer_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return load_transfer_function(in);
}

// CSV with a header row, '.' decimal separator, 12 significant digits.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
    for (const auto& col : columns)
        if (col.size() != columns.front().size())
            throw std::invalid_argument("write_csv: ragged columns");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    out << std::setprecision(12);
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << columns[c][r];
        out << "\n";
    }
}

}  // namespace dhrom

#endif
