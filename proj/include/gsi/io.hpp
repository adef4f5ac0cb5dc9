#pragma once

// Line-oriented game files. '#' starts a comment; the first record names the
// kind. Numbers are exact ("p/q" or integers).
//
//   ssg                       energy                  pa
//   sink <v> <payoff>         state <v> <0|1>         state <s> <label>
//   av <v> (<succ> <p>)+      edge <v> <v'> <w>       dist <s> (<t> <p>)+
//   max <v> <succ>+
//   min <v> <succ>+

#include "gsi/energy.hpp"
#include "gsi/pametrics.hpp"
#include "gsi/ssg.hpp"

#include <string>
#include <string_view>

namespace gsi {

enum class FileKind { Ssg, Energy, Pa };

FileKind detect_kind(std::string_view text);

Ssg parse_ssg(std::string_view text);
EnergyGame parse_energy(std::string_view text);
Pa parse_pa(std::string_view text);

std::string emit_ssg(const Ssg& g);
std::string emit_energy(const EnergyGame& g);
std::string emit_pa(const Pa& pa);

std::string read_file(const std::string& path);

}  // namespace gsi
