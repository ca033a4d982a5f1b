#pragma once

#include <memory>
#include <string>

#include "fracpar/field.hpp"

namespace fracpar::io {

// FPES binary layout: magic "FPES", version u32, two u32 dimensions, then
// little-endian 64-bit floats row-major. Eigensystems store x, w, lambda, phi
// after a (K, N) header; fields store the real then the imaginary sample
// matrix after an (M, N) header. Each blob <base>.bin is paired with a JSON
// manifest <base>.json carrying the structured metadata.

void write_eigensystem(const std::string& base, const EigenSystem& es);
// Restores the arrays and catalog parameters. generic_divergence coefficient
// callbacks are not serializable; reading such a file restores the discrete
// data with empty callbacks.
EigenSystem read_eigensystem(const std::string& base);

void write_field(const std::string& base, const SpaceTimeField& u);
// Rebuilds the eigensystem from the sidecar via build_eigensystem (catalog
// kinds only).
SpaceTimeField read_field(const std::string& base);

}  // namespace fracpar::io
