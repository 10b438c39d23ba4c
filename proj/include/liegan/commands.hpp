#pragma once

#include "liegan/config.hpp"

namespace liegan {

/// Subcommand entry points. Each writes its artifacts plus a manifest with
/// the fully-resolved configuration and artifact checksums, sufficient to
/// reproduce the run bit-exactly. Errors surface as exceptions; the CLI
/// wrapper maps them to exit codes (2 usage/config, 3 numeric/training).
void cmd_gen(KeyValueConfig& cfg);
void cmd_discover(KeyValueConfig& cfg);
void cmd_analyze(KeyValueConfig& cfg);
void cmd_augment_eval(KeyValueConfig& cfg);

} // namespace liegan
