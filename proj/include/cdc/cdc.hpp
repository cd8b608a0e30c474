#pragma once

// Umbrella header for the CDC inference engine.

#include "cdc/bench.hpp"
#include "cdc/bridge.hpp"
#include "cdc/domain.hpp"
#include "cdc/errors.hpp"
#include "cdc/fiber.hpp"
#include "cdc/inference.hpp"
#include "cdc/knowledge_base.hpp"
#include "cdc/lattice.hpp"
#include "cdc/meta_typing.hpp"
#include "cdc/reindex.hpp"
#include "cdc/session.hpp"
#include "cdc/tuple.hpp"
#include "cdc/validation.hpp"
