#pragma once

#include <map>
#include <string>

#include "padicres/spec_io.hpp"

namespace padicres {

using InstanceParams = std::map<std::string, std::string>;

/// "key=value,key=value"; list values separated by ':' ("super=1/2:4").
InstanceParams parse_params(const std::string& text);

/// Builds a spec for one of the instance families:
///   randomBounded   d, p, seed        entries in Z_p ∩ Q, so A is power bounded
///   staircaseShift  d, p, super       superdiagonal list of d−1 rationals
///   jordan          d, p, eigen       single Jordan block
///   diagonal        p, entries        diagonal list
/// Optional for every kind: omega, backend, precision, n_max, k_max, seed.
/// The declared radius is the largest the certified estimate allows (capped
/// at 0, or at −|ω| exponent when ω is given); when it is negative the λ
/// samples sit just inside that disk.
SpecDocument generate_instance(const std::string& kind, const InstanceParams& params);

}  // namespace padicres
