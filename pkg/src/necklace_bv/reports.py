"""Report dictionaries, their canonical JSON form and a short text rendering."""

import json


def make_report(check, status, residual_terms=(), seed=None, truncation=None, **extra):
    out = {"check": check, "status": status, "residual_terms": list(residual_terms),
           "seed": seed, "truncation": truncation}
    out.update(extra)
    return out


def finish(report, seed=None, truncation=None):
    """Fill the shared keys of a module report in place and return it."""
    report.setdefault("residual_terms", [])
    report.setdefault("seed", seed)
    report.setdefault("truncation", truncation)
    return report


def to_json(report):
    """Canonical serialization: sorted keys, fixed separators, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_text(report):
    lines = [f"{report.get('check', '?')}: {report.get('status', '?')}"]
    for key in ("seed", "truncation", "gmax"):
        if report.get(key) is not None:
            lines.append(f"  {key}: {report[key]}")
    res = report.get("residual_terms") or []
    if res:
        lines.append(f"  residual terms: {len(res)}")
        for t in res[:10]:
            lines.append(f"    {json.dumps(t, ensure_ascii=False, sort_keys=True)}")
    for sub in report.get("checks", []):
        lines.append(f"  - {sub.get('check')}: {sub.get('status')}")
    return "\n".join(lines) + "\n"


def status_of(parts):
    return "pass" if all(p["status"] == "pass" for p in parts) else "fail"
