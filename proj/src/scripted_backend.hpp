#pragma once

#include "backend.hpp"

namespace aida {

/// Offline provider that fabricates plausible, deterministic completions.
/// Every response is a pure function of the request, so runs driven by it
/// are reproducible and can be recorded into replay cassettes.
///
/// Requests are classified by marker fragments of the instruction prompts
/// (see prompts.hpp); anything unrecognized is answered as an opinion
/// statement. Statement and reaction lengths wander above the
/// configured word limits now and then so truncation paths stay exercised.
class ScriptedBackend : public Backend {
public:
    CompletionResponse complete(const CompletionRequest& request) override;
};

}  // namespace aida
