"""
Finding mislabeled examples with label information
==================================================

For each record, compare the classifier's prediction with an uninformed
baseline, as seen from the claimed label. Negative values flag labels the
model finds less plausible than chance.
"""

# %%
import math

from beliefinfo import labelinfo as li

records, flags = li.generate_synthetic(2000, 10, confidence=0.9, mislabel_fraction=0.1, seed=3)
report = li.analyze(records, flags)

print("records:", len(report.ids), "fraction negative:", report.fraction_negative)
for name, stats in report.groups.items():
    print(f"{name:>10}: mean {stats['mean_predictive']:.3f} bits, fraction negative {stats['fraction_negative']:.3f}")

# %%
# Predictive and residual information always add up to the baseline total.
print("total per record:", report.total[0], "= log2(10) =", math.log2(10))
print("largest conservation error:", report.conservation_max_error)

# %%
# The lowest-ranked records are the suspects.
flag_by_id = {r.id: f for r, f in zip(records, flags)}
top = report.ranking[:10]
print("top suspects:", top)
print("of which actually mislabeled:", sum(flag_by_id[i] for i in top))
