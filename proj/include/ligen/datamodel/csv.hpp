#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ligen/datamodel/dataset.hpp"

namespace ligen {

// Shortest decimal text that parses back to exactly `v` (at most 17
// significant digits).
std::string format_double(double v);

// CSV layout, header required:
//   spectral: x,y,f1,f2,f3,f4,f5,f6,f7,f8,nir,clear,origin
//   rssi:     x,y,ap1,ap2,ap3,ap4,ap5,ap6,origin
std::string csv_header(Modality m);

void write_dataset(const Dataset& data, const std::filesystem::path& path);
std::string dataset_to_csv(const Dataset& data);

// The modality comes from the header. Without an explicit extent the room is
// taken as the bounding box [0, max x] x [0, max y] of the samples (1 m for
// an axis with no positive coordinate).
Dataset read_dataset(const std::filesystem::path& path,
                     std::optional<Extent> extent = std::nullopt);
Dataset dataset_from_csv(const std::string& text, std::optional<Extent> extent = std::nullopt);

}  // namespace ligen
