import numpy as np, pandas as pd
from scipy.interpolate import BSpline

rng = np.random.default_rng(7)
n = 300
raw = pd.DataFrame({
    "region": rng.choice(["north", "south", "east", "west"], size=n),
    "age": rng.uniform(20, 70, size=n),
    "income": rng.normal(50, 10, size=n),
})
effect = {"north": 0.0, "south": 1.5, "east": -1.0, "west": 0.0}
raw["y"] = (raw["region"].map(effect) + np.sin((raw["age"] - 20) / 8)
            + 0.0 * raw["income"] + rng.normal(0, 0.5, size=n))

# Dummy coding: one indicator per non-reference level.
dummies = pd.get_dummies(raw["region"], prefix="region", drop_first=True, dtype=float)

# Cubic B-spline basis for age, 4 interior knots, no intercept column.
k = 3
interior = np.quantile(raw["age"], [0.2, 0.4, 0.6, 0.8])
lo, hi = raw["age"].min(), raw["age"].max()
knots = np.r_[[lo] * (k + 1), interior, [hi] * (k + 1)]
basis = BSpline.design_matrix(raw["age"].to_numpy(), knots, k).toarray()[:, 1:]
spline = pd.DataFrame(basis, columns=[f"age_bs{j + 1}" for j in range(basis.shape[1])])

data = pd.concat([raw[["y", "income"]], dummies, spline], axis=1)
data.to_csv("data.csv", index=False)

groups = [("income", 1)] + [(c, 2) for c in dummies] + [(c, 3) for c in spline]
pd.DataFrame(groups, columns=["column_name", "group_id"]).to_csv("groups.csv", index=False)
