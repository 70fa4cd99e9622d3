#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "autosmote/matrix.hpp"

namespace autosmote {

/// Named weight arrays as text. Values are written as C99 hex floats so
/// the round trip is bit-exact while the file stays inspectable.
inline void save_checkpoint(const std::string& path,
                            const std::vector<std::pair<std::string, Matrix>>& arrays) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_checkpoint: cannot write " + path);
    out << "autosmote-checkpoint 1\n";
    char buf[64];
    for (const auto& [name, m] : arrays) {
        out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                std::snprintf(buf, sizeof buf, "%a", m.at(r, c));
                out << buf << (c + 1 == m.cols() ? '\n' : ' ');
            }
        }
    }
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

inline std::map<std::string, Matrix> load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "autosmote-checkpoint" || version != 1) {
        throw std::runtime_error("load_checkpoint: unrecognized header in " + path);
    }
    std::map<std::string, Matrix> out;
    std::string name;
    while (in >> name) {
        std::size_t rows = 0, cols = 0;
        if (!(in >> rows >> cols)) {
            throw std::runtime_error("load_checkpoint: truncated shape for " + name);
        }
        Matrix m(rows, cols);
        std::string token;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!(in >> token)) {
                throw std::runtime_error("load_checkpoint: truncated data for " + name);
            }
            char* end = nullptr;
            m[i] = std::strtod(token.c_str(), &end);
            if (end == token.c_str()) {
                throw std::runtime_error("load_checkpoint: bad value '" + token + "'");
            }
        }
        out.emplace(name, std::move(m));
    }
    return out;
}

}  // namespace autosmote
