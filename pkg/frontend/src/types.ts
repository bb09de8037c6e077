// JSON shapes of the tile service responses. The UI renders these values
// verbatim; it never computes dynamics on its own.

export type Pair = [number, number]
export type SphereValue = Pair | 'inf'

export interface Classification {
	kind: string
	iters: number
	period?: number
	rep?: SphereValue
	multiplier?: Pair
	prepole_order?: number
	note?: string
}

export interface Diagnosis {
	kind: string
	sigma: number | null
	rationale: string
	text: string
}

export interface PseudoMultiplier {
	sigma: number
	rho: Pair
	w_star: SphereValue
}

export interface AnalysisRecord {
	lambda: Pair
	member: boolean | null
	color_index: number
	classification: Classification
	pole: SphereValue
	free_critical: SphereValue
	multipliers: {
		zero: Pair
		infinity: Pair
		pseudo: PseudoMultiplier[]
	}
	diagnosis: Diagnosis
	mu: SphereValue
}

export interface RaySample {
	t: number
	lambda: Pair
	mu: SphereValue
}

export interface RayResponse {
	region: string
	theta: number
	k: number
	points: RaySample[]
	landing?: { lambda: Pair; mu: SphereValue }
}

export interface PlaneWindow {
	x_min: number
	y_max: number
	width: number
	height: number
}

export interface Meta {
	planes: Record<string, PlaneWindow>
	tile_px: number
	max_zoom: number
	palette_version: string
	default_max_iter: number
}
