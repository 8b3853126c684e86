#pragma once

#include "conlang/gateway.hpp"

namespace conlang {

/// Offline model stand-in: a pure function of the rendered request that emits
/// well-formed outputs for every pipeline template. Used to record the shipped
/// fixture set and to run demos without credentials. Not a language model;
/// its outputs are deterministic filler with the right structure.
class CannedBackend : public Backend {
  public:
    std::string complete(const RenderedRequest& request) override;
};

}  // namespace conlang
