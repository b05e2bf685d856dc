#include "qtf/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qtf {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

std::string header_value(std::istream& in, const std::string& key) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("snapshot: truncated header");
    const auto sp = line.find(' ');
    if (sp == std::string::npos || line.substr(0, sp) != key)
        throw std::runtime_error("snapshot: expected header key '" + key +
                                 "', got '" + line + "'");
    return line.substr(sp + 1);
}

}  // namespace

void write_snapshot(const std::string& path, const std::string& name,
                    const Field& field, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("snapshot: cannot open " + path);
    const auto& g = *field.grid();
    std::ostringstream hdr;
    hdr.precision(17);
    hdr << "format-version 1\n";
    hdr << "field-name " << name << "\n";
    hdr << "d " << g.dim() << "\n";
    hdr << "N_axis " << g.n_axis() << "\n";
    hdr << "L_box " << g.box_scale() << "\n";
    hdr << "time " << time << "\n";
    hdr << "component-shape";
    if (field.rank() == 0) {
        hdr << " scalar";
    } else {
        for (int s : field.shape()) hdr << " " << s;
    }
    hdr << "\nendianness little\n";
    out << hdr.str();

    const auto phys = field.to_physical();
    for (const auto& c : phys)
        out.write(reinterpret_cast<const char*>(c.data()),
                  static_cast<std::streamsize>(c.size() * sizeof(double)));
    if (!out) throw std::runtime_error("snapshot: write failed for " + path);
}

SnapshotData read_snapshot(const std::string& path, double dealias_fraction) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path);

    const std::string version = header_value(in, "format-version");
    if (version != "1")
        throw std::runtime_error("snapshot: unknown format-version " + version);

    SnapshotData snap;
    snap.name = header_value(in, "field-name");
    const int d = std::stoi(header_value(in, "d"));
    const int n = std::stoi(header_value(in, "N_axis"));
    const double box = std::stod(header_value(in, "L_box"));
    snap.time = std::stod(header_value(in, "time"));

    std::vector<int> shape;
    {
        std::istringstream ss(header_value(in, "component-shape"));
        std::string tok;
        while (ss >> tok)
            if (tok != "scalar") shape.push_back(std::stoi(tok));
    }
    const std::string endian = header_value(in, "endianness");
    if (endian != "little")
        throw std::runtime_error("snapshot: unsupported endianness " + endian);

    GridPtr grid = make_grid(d, n, box, dealias_fraction);
    int ncomp = 1;
    for (int s : shape) ncomp *= s;
    std::vector<std::vector<double>> vals(
        ncomp, std::vector<double>(grid->num_points()));
    for (auto& c : vals) {
        in.read(reinterpret_cast<char*>(c.data()),
                static_cast<std::streamsize>(c.size() * sizeof(double)));
        if (!in) throw std::runtime_error("snapshot: truncated payload");
    }
    snap.field = Field::from_physical(grid, shape, vals);
    return snap;
}

std::string snapshot_info(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path);
    std::ostringstream out;
    std::string line;
    for (int i = 0; i < 8 && std::getline(in, line); ++i) out << line << "\n";
    return out.str();
}

}  // namespace qtf
