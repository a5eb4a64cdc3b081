#ifndef DSREX_DSREX_HPP
#define DSREX_DSREX_HPP

#include "dsrex/candidates.hpp"
#include "dsrex/classifier.hpp"
#include "dsrex/common.hpp"
#include "dsrex/config.hpp"
#include "dsrex/corpus.hpp"
#include "dsrex/features.hpp"
#include "dsrex/graph.hpp"
#include "dsrex/paths.hpp"
#include "dsrex/pipeline.hpp"
#include "dsrex/synth.hpp"

#endif  // DSREX_DSREX_HPP
