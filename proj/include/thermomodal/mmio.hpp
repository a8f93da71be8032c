#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "thermomodal/core.hpp"
#include "thermomodal/errors.hpp"

namespace thermomodal {

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// Matrix Market coordinate format; symmetric storage writes the lower
// triangle only.
inline void write_matrix_market(const std::string& path, const SpMat& m,
                                bool symmetric = false) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << "%%MatrixMarket matrix coordinate real "
        << (symmetric ? "symmetric" : "general") << "\n";
    long nnz = 0;
    for (int c = 0; c < m.outerSize(); ++c)
        for (SpMat::InnerIterator it(m, c); it; ++it)
            if (!symmetric || it.row() >= it.col()) ++nnz;
    out << m.rows() << " " << m.cols() << " " << nnz << "\n";
    for (int c = 0; c < m.outerSize(); ++c)
        for (SpMat::InnerIterator it(m, c); it; ++it) {
            if (symmetric && it.row() < it.col()) continue;
            out << (it.row() + 1) << " " << (it.col() + 1) << " "
                << detail::fmt_g17(it.value()) << "\n";
        }
}

// Dense matrices use the array format.
inline void write_matrix_market(const std::string& path, const Mat& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << " " << m.cols() << "\n";
    for (int c = 0; c < m.cols(); ++c)
        for (int r = 0; r < m.rows(); ++r) out << detail::fmt_g17(m(r, c)) << "\n";
}

// Reads either coordinate or array real matrices (the formats the writers
// above produce); used for round-trip verification.
inline Mat read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string header;
    std::getline(in, header);
    const bool coordinate = header.find("coordinate") != std::string::npos;
    const bool symmetric = header.find("symmetric") != std::string::npos;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '%') break;
    std::istringstream sizes(line);
    if (coordinate) {
        long rows, cols, nnz;
        sizes >> rows >> cols >> nnz;
        Mat m = Mat::Zero(rows, cols);
        for (long k = 0; k < nnz; ++k) {
            long r, c;
            double v;
            in >> r >> c >> v;
            m(r - 1, c - 1) = v;
            if (symmetric && r != c) m(c - 1, r - 1) = v;
        }
        return m;
    }
    long rows, cols;
    sizes >> rows >> cols;
    Mat m(rows, cols);
    for (long c = 0; c < cols; ++c)
        for (long r = 0; r < rows; ++r) in >> m(r, c);
    return m;
}

// Minimal NPY (v1.0) writer for float64 C-order arrays.
inline void write_npy(const std::string& path, const Mat& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    std::ostringstream dict;
    dict << "{'descr': '<f8', 'fortran_order': False, 'shape': (" << m.rows() << ", "
         << m.cols() << "), }";
    std::string header = dict.str();
    const size_t unpadded = 10 + header.size() + 1;
    const size_t pad = (64 - unpadded % 64) % 64;
    header.append(pad, ' ');
    header.push_back('\n');
    const uint16_t hlen = static_cast<uint16_t>(header.size());
    out.write("\x93NUMPY\x01\x00", 8);
    out.write(reinterpret_cast<const char*>(&hlen), 2);
    out.write(header.data(), header.size());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            out.write(reinterpret_cast<const char*>(&v), sizeof(double));
        }
}

}  // namespace thermomodal
