#pragma once

#include <stdexcept>
#include <string>

namespace oamlab {

// All library failures derive from OamError so callers can catch one type.
class OamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grid cannot represent the requested field or operation without aliasing.
class SamplingError : public OamError {
 public:
  using OamError::OamError;
};

// Argument outside the mathematical domain (zero waist, inverted wavelengths, ...).
class DomainError : public OamError {
 public:
  using OamError::OamError;
};

// Incompatible grids, out-of-range centers or shifts.
class GeometryError : public OamError {
 public:
  using OamError::OamError;
};

// Carrier lobe cannot be isolated from the DC lobe.
class DemodulationError : public OamError {
 public:
  using OamError::OamError;
};

// Winding loop crosses a region where the phase is not trustworthy.
class UnreliableLoopError : public OamError {
 public:
  using OamError::OamError;
};

class ConfigError : public OamError {
 public:
  using OamError::OamError;
};

}  // namespace oamlab
