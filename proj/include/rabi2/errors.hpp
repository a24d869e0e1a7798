#pragma once

// Error taxonomy.  Domain violations use std::domain_error /
// std::invalid_argument directly; the types below carry extra payload for
// the failure modes the CLI maps to distinct exit codes.

#include "rabi2/numeric.hpp"

#include <stdexcept>
#include <string>

namespace rabi2 {

// Spectral-collapse safety refusal: the requested coupling is so close to
// the collapse point 4|g| = omega that root scanning is refused
// (omega_big fell below the configured guard).
class CollapseGuardError : public std::runtime_error {
public:
    CollapseGuardError(const real& omega_big, double guard, const std::string& what)
        : std::runtime_error(what), omega_big_(omega_big), guard_(guard) {}
    const real& omega_big() const { return omega_big_; }
    double guard() const { return guard_; }

private:
    real omega_big_;
    double guard_;
};

// A G evaluation produced a non-finite intermediate; term_index is the
// offending series index.
class GEvalError : public std::runtime_error {
public:
    GEvalError(int term_index, const std::string& what)
        : std::runtime_error(what), term_index_(term_index) {}
    int term_index() const { return term_index_; }

private:
    int term_index_;
};

// An evaluation failure that surfaced while scanning an energy grid;
// carries the grid energy at which the failure occurred.
class RootScanError : public std::runtime_error {
public:
    RootScanError(const real& energy, const std::string& what)
        : std::runtime_error(what), energy_(energy) {}
    const real& energy() const { return energy_; }

private:
    real energy_;
};

}  // namespace rabi2
