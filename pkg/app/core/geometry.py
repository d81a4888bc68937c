from typing import Tuple

import numpy as np
from scipy.spatial.transform import Rotation


def skew(a: np.ndarray) -> np.ndarray:
	"""Matriks [a]x sehingga skew(a) @ b == cross(a, b)."""
	return np.array([
		[0.0, -a[2], a[1]],
		[a[2], 0.0, -a[0]],
		[-a[1], a[0], 0.0],
	])


def orthonormal_frame(normal: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""Frame right-handed (b1, b2, n) dengan n searah normal."""
	n = np.asarray(normal, dtype=float)
	n = n / np.linalg.norm(n)
	# sumbu koordinat yang paling tidak sejajar dengan n
	helper = np.zeros(3)
	helper[int(np.argmin(np.abs(n)))] = 1.0
	b1 = helper - np.dot(helper, n) * n
	b1 /= np.linalg.norm(b1)
	b2 = np.cross(n, b1)
	return b1, b2, n


def kabsch_rotation(source: np.ndarray, target: np.ndarray) -> np.ndarray:
	"""Rotasi proper R yang meminimalkan sum |R a_i - b_i|^2 (baris = titik, tanpa translasi)."""
	H = np.asarray(source).T @ np.asarray(target)
	U, _, Vt = np.linalg.svd(H)
	V = Vt.T
	d = np.sign(np.linalg.det(V @ U.T))
	if d == 0:
		d = 1.0
	return V @ np.diag([1.0, 1.0, d]) @ U.T


def random_rotation(rng: np.random.Generator) -> np.ndarray:
	return Rotation.random(random_state=rng).as_matrix()


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int = 3) -> np.ndarray:
	v = rng.standard_normal((count, dim))
	norms = np.linalg.norm(v, axis=1, keepdims=True)
	# gaussian nol persis praktis mustahil, tapi jangan bagi nol
	norms[norms == 0] = 1.0
	return v / norms


def fit_circle_2d(points: np.ndarray) -> Tuple[np.ndarray, float]:
	"""Fit lingkaran aljabar (Kasa). Return (center, variance jarak ke center)."""
	pts = np.asarray(points, dtype=float)
	A = np.column_stack([2.0 * pts, np.ones(len(pts))])
	b = np.sum(pts ** 2, axis=1)
	sol, *_ = np.linalg.lstsq(A, b, rcond=None)
	center = sol[:2]
	dist = np.linalg.norm(pts - center, axis=1)
	return center, float(np.var(dist))
