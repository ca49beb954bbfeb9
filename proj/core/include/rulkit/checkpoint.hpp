#pragma once

#include <iosfwd>
#include <string>

#include "rulkit/classifier.hpp"

namespace rulkit {

/// Self-describing flat text checkpoint. Layout (see docs/checkpoint.md):
///   rulkit-checkpoint v1
///   family <name>
///   config_hash <hex>  /  seed <n>  /  features k + names  /  window L
///   spec <architecture line>              (sequence families)
///   array <name> <rows> <cols>            followed by rows of decimals
///   tree <index> <node count>             followed by preorder node lines
///   end
/// Doubles are written as shortest round-trip decimals, so save/load is
/// lossless and a fixed seed reproduces byte-identical files.
void save_checkpoint(const TrainedClassifier& clf, std::ostream& out);
void save_checkpoint_file(const TrainedClassifier& clf, const std::string& path);

TrainedClassifier load_checkpoint(std::istream& in);
TrainedClassifier load_checkpoint_file(const std::string& path);

}  // namespace rulkit
