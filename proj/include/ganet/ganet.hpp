/* Copyright 2026 The ganet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef GANET_GANET_HPP_
#define GANET_GANET_HPP_

#include "ganet/augment.hpp"
#include "ganet/autodiff.hpp"
#include "ganet/box.hpp"
#include "ganet/checkpoint.hpp"
#include "ganet/config.hpp"
#include "ganet/dataset_io.hpp"
#include "ganet/error.hpp"
#include "ganet/grad_check.hpp"
#include "ganet/image.hpp"
#include "ganet/losses.hpp"
#include "ganet/metrics.hpp"
#include "ganet/net.hpp"
#include "ganet/optim.hpp"
#include "ganet/params.hpp"
#include "ganet/perlin.hpp"
#include "ganet/pipeline.hpp"
#include "ganet/postprocess.hpp"
#include "ganet/rng.hpp"
#include "ganet/synth.hpp"
#include "ganet/targets.hpp"
#include "ganet/tensor.hpp"
#include "ganet/train.hpp"

#endif  // GANET_GANET_HPP_
