#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "acipmaps/circlemap.hpp"
#include "acipmaps/density.hpp"
#include "acipmaps/distortion.hpp"
#include "acipmaps/modulus.hpp"
#include "acipmaps/transfer.hpp"

namespace acipmaps {

using json = nlohmann::json;

// CSV writers. Grids are uniform with n + 1 nodes on [0, 1].
void write_density_csv(std::ostream& os, const DensityProfile& rho, int n);
void write_map_csv(std::ostream& os, const ExpandingCircleMap& f, int n);
void write_grid_csv(std::ostream& os, const GridFunction& h);
void write_distortion_csv(std::ostream& os, const DistortionReport& r);
void write_modulus_csv(std::ostream& os, const ModulusEstimate& e1, const ModulusEstimate& e2,
                       const Modulus& omega);

json to_json(const DensityCertification& c);
json to_json(const MapCertificate& c);
json to_json(const GluingReport& g);
json to_json(const MapProvenance& p);
json to_json(const DiniResult& r, int trace_points = 32);
json to_json(const DistortionReport& r);
json to_json(const FixedPointResult& r);

/// Writes text to path, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace acipmaps
