import type { AnalysisRecord, Meta, RayResponse } from '../src/types'

// Captured verbatim from a live service so tests exercise the exact JSON
// the UI will see. LAMBDA_CENTER is the superattracting period-1 center
// of the left wandering component.

export const LAMBDA_CENTER: [number, number] = [-1, -2.9781881070693568]

export const META: Meta = {
	planes: {
		param: { x_min: -3.75, y_max: 3.25, width: 7.5, height: 6.5 },
		dyn: { x_min: -1.5, y_max: 0.85, width: 3.0, height: 2.0 },
		mu: { x_min: -1.6, y_max: 1.5, width: 5.2, height: 3.0 },
	},
	tile_px: 256,
	max_zoom: 12,
	palette_version: '1',
	default_max_iter: 800,
}

export const RECORD_CENTER: AnalysisRecord = {
	lambda: [-1.0, -2.9781881070693568],
	member: true,
	color_index: 2,
	classification: {
		kind: 'cycle',
		iters: 3,
		period: 1,
		rep: [-37.45171655853391, -3.2390913948603517e-14],
		multiplier: [0.0, -8.648713037924854e-16],
	},
	pole: [5.406749263290228e-16, 6.119780760659149],
	free_critical: [-37.451716558533874, 6.617624023838314e-15],
	multipliers: {
		zero: [2.682072022281251, 0.4422055700992589],
		infinity: [2.6820720222812486, 0.44220557009926037],
		pseudo: [
			{ sigma: 1, rho: [5.551115123125783e-16, 0.0], w_star: [-37.45171655853391, -0.0] },
			{
				sigma: 2,
				rho: [-3.9999999999999982, -11.912752428277429],
				w_star: [-2.71050656049298, 11.353743330602255],
			},
			{
				sigma: 3,
				rho: [-11.999999999999995, -35.73825728483229],
				w_star: [-1.1791592343153863, 8.890651171050688],
			},
			{
				sigma: -1,
				rho: [-3.999999999999999, -11.912752428277429],
				w_star: [0.7450267516411648, 3.120760759578334],
			},
			{
				sigma: -2,
				rho: [-11.999999999999998, -35.73825728483229],
				w_star: [0.5490400253880671, 4.1396642646861705],
			},
			{
				sigma: -3,
				rho: [-23.999999999999993, -71.47651456966457],
				w_star: [0.43102627063559085, 4.642659309713065],
			},
		],
	},
	diagnosis: {
		kind: 'wandering-escaping',
		text: 'wandering (σ=1)',
		rationale: 'cycle of translation type (1, 1): components drift by 1 per period block',
		sigma: 1,
	},
	mu: [-0.8959734347903318, -0.6366197723675814],
}

export const RAY_SHORT: RayResponse = {
	region: 'omega-minus',
	theta: 0.0,
	k: -1,
	points: [
		{
			t: -8.0,
			lambda: [-0.3815135418411637, -3.627350781913936],
			mu: [-0.7132172798700408, -0.1801908973473554],
		},
		{
			t: -6.0,
			lambda: [-0.5230424650831353, -3.6410614161794994],
			mu: [-0.690756770920582, -0.24287906416207142],
		},
		{
			t: -4.0,
			lambda: [-0.711599560857999, -3.5946110040400834],
			mu: [-0.6820283100554235, -0.33297917505980423],
		},
		{
			t: -2.0,
			lambda: [-0.9080003316496248, -3.4306181358120296],
			mu: [-0.7115995608579989, -0.45301835045029015],
		},
		{
			t: -0.0,
			lambda: [-1.0, -3.141592653589793],
			mu: [-0.8160006632992496, -0.5780509644444726],
		},
	],
	landing: {
		lambda: [-1.0, -3.141592653589793],
		mu: [-0.8160006632992496, -0.5780509644444726],
	},
}

export const SINGULAR_BODY = {
	error: 'param-singularity',
	message: 'parameter 3.14159265j degenerates the family',
	lam: [0.0, 3.14159265],
}

export function jsonResponse(body: unknown, status = 200): Response {
	return new Response(JSON.stringify(body), {
		status,
		headers: { 'content-type': 'application/json' },
	})
}
