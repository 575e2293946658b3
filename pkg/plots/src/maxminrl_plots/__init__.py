"""Offline figure rendering for maxminrl experiment CSVs."""

from .figures import (KINDS, plot_cross_sections, plot_histograms, plot_probes,
                      plot_returns, plot_visitation)

__version__ = "0.1.0"
