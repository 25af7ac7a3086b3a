#ifndef ADINSP_GEOMETRY_IO_HPP_
#define ADINSP_GEOMETRY_IO_HPP_

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "adinsp/geometry/types.hpp"

namespace adinsp {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// ASCII "xyz": one whitespace-separated `x y z` triple per line, `#` starts a comment.
inline PointCloud read_xyz(std::istream& in, const std::string& source = "<stream>") {
    PointCloud cloud;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;  // blank
        ss.seekg(0);
        double x, y, z;
        if (!(ss >> x >> y >> z)) throw ParseError(source, lineno, "expected three numbers");
        std::string extra;
        if (ss >> extra) throw ParseError(source, lineno, "unexpected trailing token '" + extra + "'");
        const Vec3 p{x, y, z};
        if (!is_finite(p)) throw ParseError(source, lineno, "non-finite coordinate");
        cloud.points.push_back(p);
    }
    return cloud;
}

inline PointCloud read_xyz_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_xyz(in, path);
}

inline void write_xyz(std::ostream& out, const PointCloud& cloud) {
    char buf[96];
    for (const auto& p : cloud.points) {
        std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", p.x(), p.y(), p.z());
        out << buf;
    }
}

inline void write_path_csv(std::ostream& out, const PathSegment& path) {
    out << "x,y,z,psi\n";
    char buf[128];
    for (const auto& p : path) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f\n", p.x, p.y, p.z, p.psi);
        out << buf;
    }
}

}  // namespace adinsp

#endif  // ADINSP_GEOMETRY_IO_HPP_
