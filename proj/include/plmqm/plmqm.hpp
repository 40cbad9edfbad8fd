// plmqm.hpp - umbrella header.

#pragma once

#include "plmqm/types.hpp"
#include "plmqm/ensemble.hpp"
#include "plmqm/pulse_algebra.hpp"
#include "plmqm/field.hpp"
#include "plmqm/timeline.hpp"
#include "plmqm/propagation.hpp"
#include "plmqm/oracle.hpp"
#include "plmqm/phasematch.hpp"
#include "plmqm/protocols.hpp"
#include "plmqm/materials.hpp"
#include "plmqm/config.hpp"
#include "plmqm/sweep.hpp"
#include "plmqm/report.hpp"
