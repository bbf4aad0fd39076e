"""Figure-data exports: boxplot summaries, scatter pairs, orderings.

Writes csv tables plus a small SVG of box plots into demos_out/.
"""

from pathlib import Path

from pirmetrics.data import fixture_path
from pirmetrics.report import (
    figure_data,
    load_profiles,
    render_boxplot_svg,
    render_table,
)

out = Path("demos_out")
out.mkdir(exist_ok=True)
rows = load_profiles(fixture_path("profiles.csv"))

# quartile/whisker rows per (group, variable)
header, data = figure_data(rows, "boxplot", variables=["pi_sjr", "pi_snip"])
(out / "boxplot.csv").write_text(render_table(header, data, "csv"))
(out / "boxplot.svg").write_text(render_boxplot_svg(data))
for row in data:
    group, variable, q1, q2, q3, lo, hi = row
    print(f"  {group:<5} {variable:<8} [{lo:.3f} | {q1:.3f} {q2:.3f} {q3:.3f} | {hi:.3f}]")

# paired values for a scatter view of production vs impact
header, data = figure_data(rows, "scatter", x="p_sjr", y="i_sjr")
(out / "scatter.csv").write_text(render_table(header, data, "csv"))
print(f"\nscatter rows: {len(data)}")

# authors listed by their impact dimension, strongest first
header, data = figure_data(rows, "ordered_dimensions", order_family="SJR")
(out / "ordered.csv").write_text(render_table(header, data, "csv"))
print("highest impact dimension:", data[0][0], round(data[0][3], 3))
print("wrote", sorted(p.name for p in out.iterdir()))
