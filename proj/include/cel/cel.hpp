#pragma once

#include "cel/baselines.hpp"
#include "cel/calibration.hpp"
#include "cel/ensemble.hpp"
#include "cel/errors.hpp"
#include "cel/evaluation.hpp"
#include "cel/features.hpp"
#include "cel/io.hpp"
#include "cel/porter.hpp"
#include "cel/rng.hpp"
#include "cel/store.hpp"
#include "cel/svm.hpp"
#include "cel/tfidf.hpp"
