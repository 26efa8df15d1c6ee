# coding=utf8
"""Genericity Scenes

Two polygons on a plane, one partially hiding the other. The support line \
count of what stays visible is the contrast, and rotating the object \
assumed to be at the back tells which occlusion order is the generic one
"""
from __future__ import annotations

__author__		= "Chris Nasr"
__copyright__	= "Ouroboros Coding Inc."
__email__		= "chris@ouroboroscoding.com"
__created__		= "2024-02-22"

# Limit exports
__all__ = [
	'OcclusionVerdict', 'Placement', 'Polygon', 'Scene', 'SupportLines',
	'build_scene', 'count_support_lines', 'infer_occlusion_order',
	'load_fixture', 'lone_scene', 'outlines_match', 'scene_from_dict',
	'visible_outline'
]

# Pip imports
import numpy as np
from scipy.spatial.distance import pdist

# Python imports
from collections import Counter
from dataclasses import asdict, dataclass, field
import math

# Local imports
from group_genericity import output
from group_genericity.contrasts import Contrast
from group_genericity.exceptions import \
	GenericityConfigException, GenericityDataException
from group_genericity.groups import RngState

ANGLE_TOLERANCE = 1e-6
"""Angle Tolerance

Default largest difference, in radians, between directions of one line"""

LENGTH_TOLERANCE = 1e-9
"""Length Tolerance

Visible pieces shorter than this are dropped"""

MIN_ROTATIONS = 50
"""Min Rotations

The fewest rotations the occlusion order test accepts"""

OFFSET_TOLERANCE = 1e-6
"""Offset Tolerance

Default largest difference between offsets of one line, once the scene is \
scaled to a unit diameter"""

def _cross(a: np.ndarray, b: np.ndarray) -> float:
	return float(a[0] * b[1] - a[1] * b[0])

def _rotation(phi: float) -> np.ndarray:
	fC, fS = math.cos(phi), math.sin(phi)
	return np.array([[fC, -fS], [fS, fC]])

class Polygon(object):
	"""Polygon

	A simple polygon given by its vertices in counterclockwise order. Convex \
	polygons are strictly convex, the front object of a scene may drop that \
	requirement
	"""

	def __init__(self, vertices: np.ndarray, convex: bool = True):
		"""Constructor

		Creates a new instance

		Arguments:
			vertices (numpy.ndarray): The n x 2 vertices
			convex (bool): Optional, false to accept a non-convex polygon

		Raises:
			GenericityDataException

		Returns:
			Polygon
		"""

		# Store the vertices
		self.vertices: np.ndarray = np.asarray(vertices, dtype=float)
		self.convex: bool = convex

		# Check the shape
		if self.vertices.ndim != 2 or self.vertices.shape[1] != 2 or \
			self.vertices.shape[0] < 3:
			raise GenericityDataException(
				'invalid-input', 'polygons need at least 3 2D vertices'
			)
		if not np.all(np.isfinite(self.vertices)):
			raise GenericityDataException(
				'invalid-input', 'polygon vertices must be finite'
			)

		# Edges can't be empty, and the polygon has to turn left
		aEdges = np.roll(self.vertices, -1, axis=0) - self.vertices
		if np.any(np.linalg.norm(aEdges, axis=1) <= LENGTH_TOLERANCE):
			raise GenericityDataException(
				'invalid-input', 'polygon has a repeated vertex'
			)
		if self.area <= LENGTH_TOLERANCE:
			raise GenericityDataException(
				'invalid-input', 'polygon is degenerate or clockwise'
			)

		# Convex ones turn left at every vertex
		if convex:
			aTurns = aEdges[:, 0] * np.roll(aEdges, -1, axis=0)[:, 1] - \
				aEdges[:, 1] * np.roll(aEdges, -1, axis=0)[:, 0]
			if np.any(aTurns <= LENGTH_TOLERANCE):
				raise GenericityDataException(
					'invalid-input', 'polygon is not strictly convex'
				)

		# Others may not cross themselves
		else:
			self._check_simple()

	def __repr__(self) -> str:
		return 'Polygon(%s)' % self.vertices.tolist()

	def _check_simple(self) -> None:
		"""Check Simple

		Raises if two edges that do not share a vertex touch

		Raises:
			GenericityDataException
		"""
		lEdges = self.edges()
		iN = len(lEdges)
		for i in range(iN):
			for j in range(i + 2, iN):
				if i == 0 and j == iN - 1:
					continue
				if _segment_params(lEdges[i], lEdges[j]):
					raise GenericityDataException(
						'invalid-input', 'polygon edges %d and %d cross' % (i, j)
					)

	@property
	def area(self) -> float:
		"""Signed area, positive counterclockwise"""
		aX = self.vertices[:, 0]
		aY = self.vertices[:, 1]
		return float(np.dot(aX, np.roll(aY, -1)) - np.dot(np.roll(aX, -1), aY)) / 2.0

	@property
	def centroid(self) -> np.ndarray:
		"""Centroid of the enclosed area"""
		aV = self.vertices
		aN = np.roll(aV, -1, axis=0)
		aCross = aV[:, 0] * aN[:, 1] - aN[:, 0] * aV[:, 1]
		return ((aV + aN) * aCross[:, None]).sum(axis=0) / (6.0 * self.area)

	def contains(self, point: np.ndarray, tol: float = LENGTH_TOLERANCE) -> bool:
		"""Contains

		Returns true if the point is strictly inside, points within tol of \
		the boundary are not

		Arguments:
			point (float[2]): The point
			tol (float): Optional, the boundary tolerance

		Returns:
			bool
		"""
		aP = np.asarray(point, dtype=float)
		aA = self.vertices
		aB = np.roll(aA, -1, axis=0)

		# On the boundary
		aD = aB - aA
		aT = np.clip(
			np.einsum('ij,ij->i', aP - aA, aD) / np.einsum('ij,ij->i', aD, aD),
			0.0, 1.0
		)
		if np.min(np.linalg.norm(aA + aT[:, None] * aD - aP, axis=1)) <= tol:
			return False

		# Crossing number of a horizontal ray
		aUp = (aA[:, 1] > aP[1]) != (aB[:, 1] > aP[1])
		with np.errstate(divide='ignore', invalid='ignore'):
			aX = aA[:, 0] + (aP[1] - aA[:, 1]) * aD[:, 0] / aD[:, 1]
		return bool(np.count_nonzero(aUp & (aX > aP[0])) % 2)

	def edges(self) -> list[np.ndarray]:
		"""Edges

		Returns each edge as a 2 x 2 array of its end points

		Returns:
			numpy.ndarray[]
		"""
		aNext = np.roll(self.vertices, -1, axis=0)
		return [
			np.array([self.vertices[i], aNext[i]])
			for i in range(self.vertices.shape[0])
		]

	def rotated(self, phi: float, center: np.ndarray | None = None) -> Polygon:
		"""Rotated

		Returns the polygon rotated by phi about a center, its centroid by \
		default

		Arguments:
			phi (float): The angle in radians
			center (float[2]): Optional, the center of the rotation

		Returns:
			Polygon
		"""
		aC = self.centroid if center is None else np.asarray(center, dtype=float)
		return Polygon(
			(self.vertices - aC) @ _rotation(phi).T + aC, self.convex
		)

	def to_dict(self) -> dict:
		return {'vertices': self.vertices.tolist(), 'convex': self.convex}

@dataclass
class Placement(object):
	"""Placement

	Where an object goes on the scene: rotated by orientation about the \
	origin of its own frame, then moved to position
	"""
	position: tuple[float, float] = (0.0, 0.0)
	orientation: float = 0.0

	def __post_init__(self):
		self.position = (float(self.position[0]), float(self.position[1]))
		self.orientation = float(self.orientation) % (2.0 * math.pi)

	def place(self, polygon: Polygon) -> Polygon:
		"""Place

		Returns the polygon in scene coordinates

		Arguments:
			polygon (Polygon): The polygon in its own frame

		Returns:
			Polygon
		"""
		return Polygon(
			polygon.vertices @ _rotation(self.orientation).T + \
				np.array(self.position),
			polygon.convex
		)

@dataclass
class Scene(object):
	"""Scene

	The objects, their placements, and the segments left visible: the edges \
	of the front object whole, and what's left of the back object's edges \
	once the front one is put over them. A lone scene has no back object
	"""
	back: tuple[Polygon, Placement] | None
	front: tuple[Polygon, Placement]
	visible_edges: list[np.ndarray] = field(repr=False)
	name: str = ''

	@property
	def placed_back(self) -> Polygon | None:
		"""The back polygon in scene coordinates"""
		return None if self.back is None else self.back[1].place(self.back[0])

	@property
	def placed_front(self) -> Polygon:
		"""The front polygon in scene coordinates"""
		return self.front[1].place(self.front[0])

	def to_dict(self) -> dict:
		"""To Dict

		Returns the objects and placements of the scene

		Returns:
			dict
		"""
		dRet = {'name': self.name}
		for s, t in (('back', self.back), ('front', self.front)):
			if t is not None:
				dRet[s] = {'polygon': t[0].to_dict(), 'placement': asdict(t[1])}
		return dRet

@dataclass
class OcclusionVerdict(object):
	"""Occlusion Verdict

	The count of the observed scene, and per hypothesis the share of random \
	rotations of its back object that keep that count, with the histogram \
	of the counts seen
	"""
	observed_count: int
	typicality_a: float
	typicality_b: float
	verdict: str
	n_rotations: int
	histogram_a: dict = field(default_factory=dict)
	histogram_b: dict = field(default_factory=dict)

	def to_dict(self) -> dict:
		return asdict(self)

def _segment_params(segment: np.ndarray, edge: np.ndarray) -> list[float]:
	"""Segment Params

	Returns the parameters along segment, in [0, 1], of where it meets the \
	edge. Overlapping collinear edges give the parameters of the overlap's \
	ends

	Arguments:
		segment (numpy.ndarray): The 2 x 2 segment
		edge (numpy.ndarray): The 2 x 2 edge

	Returns:
		float[]
	"""
	aP, aR = segment[0], segment[1] - segment[0]
	aQ, aS = edge[0], edge[1] - edge[0]
	fDenom = _cross(aR, aS)
	fScale = np.linalg.norm(aR) * np.linalg.norm(aS)
	aQP = aQ - aP

	# Crossing lines
	if abs(fDenom) > 1e-12 * fScale:
		fT = _cross(aQP, aS) / fDenom
		fU = _cross(aQP, aR) / fDenom
		if -1e-12 <= fU <= 1 + 1e-12 and -1e-12 <= fT <= 1 + 1e-12:
			return [min(max(fT, 0.0), 1.0)]
		return []

	# Parallel but not collinear
	if abs(_cross(aQP, aR)) > 1e-12 * np.linalg.norm(aR) ** 2:
		return []

	# Collinear, the overlap's ends
	fRR = float(np.dot(aR, aR))
	fT0 = float(np.dot(aQP, aR)) / fRR
	fT1 = float(np.dot(aQP + aS, aR)) / fRR
	fLow, fHigh = max(min(fT0, fT1), 0.0), min(max(fT0, fT1), 1.0)
	if fLow > fHigh:
		return []
	return [fLow, fHigh]

def _clip(segment: np.ndarray, occluder: Polygon) -> list[np.ndarray]:
	"""Clip

	Returns the pieces of the segment not strictly inside the occluder. The \
	segment is split wherever it meets the occluder's boundary, and each \
	piece kept or dropped by whether its midpoint is inside

	Arguments:
		segment (numpy.ndarray): The 2 x 2 segment
		occluder (Polygon): The front polygon

	Returns:
		numpy.ndarray[]
	"""

	# Split points
	lT = [0.0, 1.0]
	for aEdge in occluder.edges():
		lT.extend(_segment_params(segment, aEdge))
	aT = np.unique(np.round(np.array(lT), 15))

	# Keep the visible pieces, merging neighbours
	aD = segment[1] - segment[0]
	lPieces = []
	fStart = None
	for fA, fB in zip(aT[:-1], aT[1:]):
		bVisible = not occluder.contains(segment[0] + aD * (fA + fB) / 2.0)
		if bVisible and fStart is None:
			fStart = fA
		elif not bVisible and fStart is not None:
			lPieces.append((fStart, fA))
			fStart = None
	if fStart is not None:
		lPieces.append((fStart, 1.0))

	# Drop the slivers
	fLength = float(np.linalg.norm(aD))
	return [
		np.array([segment[0] + aD * fA, segment[0] + aD * fB])
		for fA, fB in lPieces if (fB - fA) * fLength > LENGTH_TOLERANCE
	]

def build_scene(
	back: Polygon,
	front: Polygon,
	placements: tuple[Placement, Placement],
	name: str = ''
) -> Scene:
	"""Build Scene

	Places the back object, then the front one over it

	Arguments:
		back (Polygon): The object at the back, convex
		front (Polygon): The object at the front
		placements (Placement[2]): The placements of back and front
		name (str): Optional, the name of the scene

	Raises:
		GenericityDataException

	Returns:
		Scene
	"""

	# Only the occluder may be non-convex
	if not back.convex:
		raise GenericityDataException(
			'invalid-input', 'the back object must be convex'
		)

	# Place both
	oBackPlace, oFrontPlace = placements
	oBack = oBackPlace.place(back)
	oFront = oFrontPlace.place(front)

	# Front edges whole, back edges clipped
	lVisible = oFront.edges()
	for aEdge in oBack.edges():
		lVisible.extend(_clip(aEdge, oFront))

	# Return the scene
	return Scene((back, oBackPlace), (front, oFrontPlace), lVisible, name)

def lone_scene(polygon: Polygon, placement: Placement | None = None) -> Scene:
	"""Lone Scene

	A scene with a single object

	Arguments:
		polygon (Polygon): The object
		placement (Placement): Optional, where it goes

	Returns:
		Scene
	"""
	oPlace = placement or Placement()
	return Scene(None, (polygon, oPlace), oPlace.place(polygon).edges())

def _lines(
	segments: list[np.ndarray],
	angle_tol: float,
	offset_tol: float
) -> tuple[list[int], list[float], list[float]]:
	"""Lines

	Groups segments by the line carrying them. The scene is moved to the \
	mean of the end points and scaled to a unit diameter, then each segment \
	gets its direction modulo π and the signed offset of its line, and two \
	segments share a line when both agree within the tolerances. Groups are \
	the transitive closure of that relation

	Returns:
		tuple (group of each segment, angles, offsets)
	"""
	if not segments:
		return [], [], []

	# Normalise
	aPoints = np.concatenate(segments)
	aCenter = aPoints.mean(axis=0)
	fDiameter = float(pdist(aPoints).max()) if aPoints.shape[0] > 1 else 1.0
	fDiameter = fDiameter if fDiameter > 0 else 1.0

	# Direction and offset of each segment
	lAngles = []
	lOffsets = []
	for a in segments:
		aD = a[1] - a[0]
		fAngle = math.atan2(aD[1], aD[0]) % math.pi
		aN = np.array([-math.sin(fAngle), math.cos(fAngle)])
		lAngles.append(fAngle)
		lOffsets.append(float(np.dot(aN, (a[0] - aCenter) / fDiameter)))

	# Union find on matching pairs
	lParent = list(range(len(segments)))
	def root(i):
		while lParent[i] != i:
			lParent[i] = lParent[lParent[i]]
			i = lParent[i]
		return i
	for i in range(len(segments)):
		for j in range(i + 1, len(segments)):
			fDiff = abs(lAngles[i] - lAngles[j])

			# Near 0 and π the normals point opposite ways
			if fDiff <= angle_tol:
				bSame = abs(lOffsets[i] - lOffsets[j]) <= offset_tol
			elif math.pi - fDiff <= angle_tol:
				bSame = abs(lOffsets[i] + lOffsets[j]) <= offset_tol
			else:
				bSame = False
			if bSame:
				lParent[root(i)] = root(j)

	# Return the groups
	return [root(i) for i in range(len(segments))], lAngles, lOffsets

def count_support_lines(
	scene: Scene,
	angle_tol: float = ANGLE_TOLERANCE,
	offset_tol: float = OFFSET_TOLERANCE
) -> int:
	"""Count Support Lines

	The number of distinct lines carrying the visible segments of a scene. \
	Collinear segments share a line whichever object they belong to, \
	parallel ones at different offsets do not

	Arguments:
		scene (Scene): The scene
		angle_tol (float): Optional, the direction tolerance in radians
		offset_tol (float): Optional, the offset tolerance at unit diameter

	Returns:
		uint
	"""
	lGroups, _, _ = _lines(scene.visible_edges, angle_tol, offset_tol)
	return len(set(lGroups))

def visible_outline(
	scene: Scene,
	angle_tol: float = ANGLE_TOLERANCE,
	offset_tol: float = OFFSET_TOLERANCE
) -> list[np.ndarray]:
	"""Visible Outline

	The visible geometry of a scene with the segments of each support line \
	merged where they touch or overlap, sorted, so that two scenes showing \
	the same picture give the same outline whatever objects made it

	Arguments:
		scene (Scene): The scene
		angle_tol (float): Optional, the direction tolerance in radians
		offset_tol (float): Optional, the offset tolerance at unit diameter

	Returns:
		numpy.ndarray[]
	"""
	lSegments = scene.visible_edges
	lGroups, lAngles, _ = _lines(lSegments, angle_tol, offset_tol)

	# Go through each line
	lRet = []
	for iGroup in sorted(set(lGroups)):
		lMembers = [i for i, g in enumerate(lGroups) if g == iGroup]
		fAngle = lAngles[lMembers[0]]
		aU = np.array([math.cos(fAngle), math.sin(fAngle)])
		aBase = lSegments[lMembers[0]][0]

		# Intervals along the direction
		lSpans = sorted(
			tuple(sorted(float(np.dot(p - aBase, aU)) for p in lSegments[i]))
			for i in lMembers
		)

		# Merge them
		lMerged = [list(lSpans[0])]
		for fA, fB in lSpans[1:]:
			if fA <= lMerged[-1][1] + LENGTH_TOLERANCE:
				lMerged[-1][1] = max(lMerged[-1][1], fB)
			else:
				lMerged.append([fA, fB])

		# Back to points, each segment ordered by its end points
		for fA, fB in lMerged:
			a = np.array([aBase + fA * aU, aBase + fB * aU])
			lRet.append(a[np.lexsort((a[:, 1], a[:, 0]))])

	# Return the segments in a fixed order
	return sorted(lRet, key = lambda a: tuple(np.round(a.ravel(), 9)))

def outlines_match(
	a: list[np.ndarray],
	b: list[np.ndarray],
	tol: float = OFFSET_TOLERANCE
) -> bool:
	"""Outlines Match

	Returns true if every segment of one outline has a segment of the other \
	with the same end points, within tol

	Arguments:
		a (numpy.ndarray[]): The first outline
		b (numpy.ndarray[]): The second outline
		tol (float): Optional, the largest end point distance

	Returns:
		bool
	"""
	if len(a) != len(b):
		return False
	lLeft = list(b)
	for aSeg in a:
		for i, aOther in enumerate(lLeft):
			if np.max(np.abs(aSeg - aOther)) <= tol:
				del lLeft[i]
				break
		else:
			return False
	return True

def _rotated_counts(
	scene: Scene,
	phis: np.ndarray,
	angle_tol: float,
	offset_tol: float
) -> list[int]:
	"""Rotated Counts

	The support line count of the scene with its back object turned about \
	its own centroid by each of the angles

	Returns:
		uint[]
	"""
	oBack = scene.placed_back
	oFront = scene.placed_front
	oStill = Placement()
	return [
		count_support_lines(
			build_scene(oBack.rotated(f), oFront, (oStill, oStill)),
			angle_tol, offset_tol
		) for f in phis
	]

def infer_occlusion_order(
	scene_a: Scene,
	scene_b: Scene,
	n_rotations: int,
	rng: RngState,
	angle_tol: float = ANGLE_TOLERANCE,
	offset_tol: float = OFFSET_TOLERANCE
) -> OcclusionVerdict:
	"""Infer Occlusion Order

	Two hypotheses explain the same picture with different objects at the \
	back. For each, the back object is rotated about its centroid by angles \
	drawn uniformly on [0, 2π), and its typicality is the share of angles \
	that keep the observed support line count. The more typical hypothesis \
	wins, equal typicalities are undecided

	Arguments:
		scene_a (Scene): The first hypothesis
		scene_b (Scene): The second hypothesis
		n_rotations (uint): The number of angles per hypothesis, at least 50
		rng (RngState): The random state
		angle_tol (float): Optional, the direction tolerance in radians
		offset_tol (float): Optional, the offset tolerance at unit diameter

	Raises:
		GenericityConfigException
		GenericityDataException

	Returns:
		OcclusionVerdict
	"""

	# Check the count
	if n_rotations < MIN_ROTATIONS:
		raise GenericityConfigException(
			'invalid-parameter', 'n_rotations must be at least %d' % MIN_ROTATIONS
		)

	# Both need a back object and have to show the same thing
	if scene_a.back is None or scene_b.back is None:
		raise GenericityDataException(
			'inconsistent-hypothesis', 'each hypothesis needs a back object'
		)
	if not outlines_match(
		visible_outline(scene_a, angle_tol, offset_tol),
		visible_outline(scene_b, angle_tol, offset_tol)
	):
		raise GenericityDataException(
			'inconsistent-hypothesis',
			'hypotheses "%s" and "%s" do not show the same scene' % (
				scene_a.name or 'a', scene_b.name or 'b'
			)
		)

	# The observed count
	iObserved = count_support_lines(scene_a, angle_tol, offset_tol)

	# Rotate each hypothesis with its own stream
	lTypical = []
	lHistograms = []
	for i, oScene in enumerate((scene_a, scene_b)):
		aPhi = rng.derive(i).generator.uniform(0.0, 2.0 * math.pi, n_rotations)
		lCounts = _rotated_counts(oScene, aPhi, angle_tol, offset_tol)
		lTypical.append(lCounts.count(iObserved) / n_rotations)
		lHistograms.append({
			str(k): v for k, v in sorted(Counter(lCounts).items())
		})

	# Decide
	if lTypical[0] > lTypical[1]:
		sVerdict = scene_a.name or 'a'
	elif lTypical[1] > lTypical[0]:
		sVerdict = scene_b.name or 'b'
	else:
		sVerdict = 'undecided'

	# Return the verdict
	return OcclusionVerdict(
		iObserved, lTypical[0], lTypical[1], sVerdict, n_rotations,
		lHistograms[0], lHistograms[1]
	)

def scene_from_dict(data: dict) -> Scene:
	"""Scene From Dict

	Builds a scene from its JSON form, {"name", "back": {"polygon", \
	"placement"}, "front": {...}} where a polygon is {"vertices", "convex"} \
	and a placement {"position", "orientation"}

	Arguments:
		data (dict): The scene

	Raises:
		GenericityDataException

	Returns:
		Scene
	"""
	try:
		def part(d):
			return (
				Polygon(d['polygon']['vertices'], d['polygon'].get('convex', True)),
				Placement(**d.get('placement', {}))
			)
		oFront = part(data['front'])
		if data.get('back') is None:
			return lone_scene(*oFront)
		oBack = part(data['back'])
	except (KeyError, TypeError, ValueError) as e:
		raise GenericityDataException(
			'invalid-input', 'bad scene description: %s' % str(e)
		)
	return build_scene(
		oBack[0], oFront[0], (oBack[1], oFront[1]), data.get('name', '')
	)

def load_fixture(path: str) -> tuple[Scene, Scene]:
	"""Load Fixture

	Reads a fixture file holding the two hypotheses of one picture under \
	the keys "a" and "b"

	Arguments:
		path (str): The path of the JSON file

	Raises:
		GenericityDataException

	Returns:
		tuple (Scene, Scene)
	"""
	try:
		dData = output.read_json(path)
	except (OSError, ValueError) as e:
		raise GenericityDataException(
			'invalid-input', '%s: %s' % (path, str(e))
		)
	if not isinstance(dData, dict) or 'a' not in dData or 'b' not in dData:
		raise GenericityDataException(
			'invalid-input', '%s: fixtures hold the hypotheses "a" and "b"' % path
		)
	return scene_from_dict(dData['a']), scene_from_dict(dData['b'])

class SupportLines(Contrast):
	"""Support Lines

	The number of lines carrying the visible edges of a scene

	Extends:
		Contrast
	"""

	def __init__(self,
		angle_tol: float = ANGLE_TOLERANCE,
		offset_tol: float = OFFSET_TOLERANCE
	):
		self.angle_tol = angle_tol
		self.offset_tol = offset_tol

	def evaluate(self, attribute: Scene) -> float:
		return float(count_support_lines(
			attribute, self.angle_tol, self.offset_tol
		))

# Register the contrast
SupportLines.add_type('support_lines')
