"""scikit-learn style front end for the piercing pipeline."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_disks, check_polygon
from .geodesics import DistanceField
from .kernel import triangulate
from .mindisk import TAU_PIERCE, TAU_TAN
from .piercing import compute_piercing_set


class GeodesicPiercer(BaseEstimator):
    """Pierce a pairwise intersecting family of geodesic disks with at most five points.

    Parameters
    ----------
    polygon : array-like of shape (n_vertices, 2)
        The simple polygon the disks live in (either orientation).
    tol : float, default=1e-7
        Slack allowed when deciding whether a point pierces a disk.
    tangency_tol : float, default=1e-6
        Relative tolerance classifying disks as tangent to the minimal disk.
    check_pairwise : bool, default=True
        Reject families with a non-intersecting pair.

    Attributes
    ----------
    points_ : ndarray of shape (k, 2)
        The piercing points, k <= 5.
    provenance_ : list of str
        Landmark name of each point.
    case_ : str
    min_disk_ : MinDiskResult
    frame_ : Frame or None
    n_points_ : int
    """

    def __init__(self, polygon=None, tol=TAU_PIERCE, tangency_tol=TAU_TAN, check_pairwise=True):
        self.polygon = polygon
        self.tol = tol
        self.tangency_tol = tangency_tol
        self.check_pairwise = check_pairwise

    def fit(self, X, y=None):
        """X holds one disk per row: (cx, cy, r)."""
        poly = check_polygon(self.polygon)
        disks = check_disks(X, poly)
        self.polygon_ = poly
        self.field_ = DistanceField(poly)
        res = compute_piercing_set(poly, disks, tri=triangulate(poly), field=self.field_,
                                   tangency_tol=self.tangency_tol, check_pairwise=self.check_pairwise)
        self.piercing_set_ = res
        self.points_ = res.as_array()
        self.provenance_ = list(res.provenance)
        self.case_ = res.case.value
        self.min_disk_ = res.min_disk
        self.frame_ = res.frame
        self.n_points_ = len(res.points)
        return self

    def transform(self, X):
        """Slack r - d(c, s) of every disk (rows) against every point (columns)."""
        check_is_fitted(self, "points_")
        disks = check_disks(X, self.polygon_)
        D = self.field_.sources([d.center for d in disks]).distances_many(self.points_)
        r = np.array([d.radius for d in disks])
        return r[:, None] - D.T

    def predict(self, X):
        """Index of the deepest point piercing each disk, -1 when none does."""
        S = self.transform(X)
        best = S.argmax(axis=1)
        return np.where(S.max(axis=1) >= -self.tol, best, -1)

    def score(self, X, y=None):
        """Fraction of the disks in X that are pierced."""
        return float(np.mean(self.predict(X) >= 0))
