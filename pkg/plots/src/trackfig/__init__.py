"""trackfig: offline figure rendering for polytrack CSV exports."""

__version__ = "0.1.0"

from .render import (
    FigureSpec,
    RenderError,
    load_columns,
    render_error,
    render_rate_sweep,
    render_tracking,
)

__all__ = [
    "FigureSpec",
    "RenderError",
    "load_columns",
    "render_error",
    "render_rate_sweep",
    "render_tracking",
]
