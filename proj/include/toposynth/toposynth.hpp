#pragma once

#include "toposynth/builders.hpp"
#include "toposynth/circuits.hpp"
#include "toposynth/consensus.hpp"
#include "toposynth/cycle_time.hpp"
#include "toposynth/delay_model.hpp"
#include "toposynth/errors.hpp"
#include "toposynth/fixtures.hpp"
#include "toposynth/graph.hpp"
#include "toposynth/io.hpp"
#include "toposynth/matching.hpp"
#include "toposynth/overlay.hpp"
#include "toposynth/simulator.hpp"
#include "toposynth/training.hpp"
#include "toposynth/tree_algos.hpp"
