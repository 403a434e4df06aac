"""
Negative information in a Gaussian ensemble
===========================================

Infer a 2-D location from 10 samples, then keep collecting batches of 10,
20 and 40. How does each later posterior rate the first inference?
"""

# %%
import math
import os

import numpy as np

from beliefinfo import experiments as ex

N = int(os.environ.get("DEMO_EXPERIMENTS", 5000))
config = ex.ExperimentConfig(num_experiments=N, master_seed=2024)
summary = ex.run_ensemble(config)
out = summary.to_json("bits")
print("mutual information:", round(out["mutual_info_bits"], 4), "bits")
for stage in out["stages"]:
    print(f"{stage['name']:>12}: mean {stage['mean']:7.3f}  fraction negative {stage['fraction_negative']:.4f}"
          f"  min {stage['argmin']['value']:8.3f} (run {stage['argmin']['experiment_id']})")

# %%
# Every first posterior values itself at least at the covariance floor.
print("floor:", (math.log(41) - 40 / 41) / math.log(2), "bits")

# In the realization limit the values follow a Laplace law centered at the
# mutual information with scale 1/ln 2.
lap = out["realization_laplace"]
print("Laplace fit:", round(lap["location"], 3), round(lap["scale"], 3),
      "implied fraction negative:", round(lap["implied_fraction_negative"], 4))

# %%
# The worst first inference, replayed from its seed.
worst = ex.run_experiment(config, summary.stage("view4").argmin)
print("true theta:", worst.true_theta, "first batch mean:", worst.batch_means[0])
print("info per view (bits):", np.round(np.array(worst.first_inference_info_per_view) / math.log(2), 3))
print("bounds audit:", ex.bounds_audit(worst, config.model).to_json())

# %%
# If the first batch came from a different ground truth, later data mostly
# judge that first inference harshly.
bad = ex.run_ensemble(ex.ExperimentConfig(num_experiments=min(N, 1000), master_seed=2024, scenario="inconsistent"))
v2 = bad.stage("view2")
print(f"inconsistent first batch: view2 median {v2.median / math.log(2):.2f} bits, "
      f"fraction negative {v2.fraction_negative:.3f}")
