#pragma once

#include <string>

#include "qtf/field.hpp"

namespace qtf {

// Field snapshot file: 8 textual header lines
//   format-version 1
//   field-name <name>
//   d <dim>
//   N_axis <n>
//   L_box <box_scale>
//   time <t>
//   component-shape <dims...; "scalar" for rank 0>
//   endianness little
// followed by raw little-endian float64 physical-space values, one component
// after another, row-major over grid points. Readers reject any other
// format-version.
struct SnapshotData {
    std::string name;
    double time = 0.0;
    Field field;
};

void write_snapshot(const std::string& path, const std::string& name,
                    const Field& field, double time);

SnapshotData read_snapshot(const std::string& path,
                           double dealias_fraction = 2.0 / 3.0);

std::string snapshot_info(const std::string& path);

}  // namespace qtf
