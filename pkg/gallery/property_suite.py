"""A short run of the seeded property harness.

Every property is checked for every standard gauge in dimensions 2-4; a
FLAG would carry a dossier with all inputs needed to replay it.  The same
run is available as ``adnorm verify --config cfg.json``.

Run with ``python3 gallery/property_suite.py``.
"""

from adnorm.verify import replay, run_suite, suite_to_dict

cfg = {"n": [2, 3, 4], "seeds": [1], "trials": 10}
result = suite_to_dict(run_suite(cfg), cfg)
print(f"{len(result['reports'])} reports, {result['flags']} FLAG, {result['inconclusive']} INCONCLUSIVE")
by_prop = {}
for r in result["reports"]:
    prop = r["property_id"].split("/")[0]
    by_prop[prop] = max(by_prop.get(prop, 0.0), r["max_violation"])
for prop, v in by_prop.items():
    print(f"  {prop:13s} max violation {v:.2e}")
worst = max(result["reports"], key=lambda r: r["max_violation"])
print("replaying the worst case of", worst["property_id"], "->", f"{replay(worst, cfg):.2e}")
