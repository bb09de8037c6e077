// Explorer state and its URL-fragment codec. The fragment is the single
// shareable artifact: reloading a deep link must restore the viewport,
// the selected parameter, and the overlay toggles exactly. Numbers are
// serialized with String(), whose shortest-round-trip output re-parses
// to the identical float64.

export interface ViewState {
	cx: number
	cy: number
	zoom: number
}

export type ParamPlane = 'param' | 'mu'

export interface ExplorerState {
	plane: ParamPlane
	views: { param: ViewState; mu: ViewState; dyn: ViewState }
	lambda: [number, number] | null
	dynOpen: boolean
	rays: boolean
	markers: boolean
}

// centers of the served root windows at zoom 0 (overridden from /api/meta
// at boot; kept here only so a bare '#' decodes to something sensible)
export const DEFAULT_VIEWS = {
	param: { cx: 0, cy: 0, zoom: 0 },
	mu: { cx: 1, cy: 0, zoom: 0 },
	dyn: { cx: 0, cy: -0.15, zoom: 0 },
}

export function defaultState(): ExplorerState {
	return {
		plane: 'param',
		views: {
			param: { ...DEFAULT_VIEWS.param },
			mu: { ...DEFAULT_VIEWS.mu },
			dyn: { ...DEFAULT_VIEWS.dyn },
		},
		lambda: null,
		dynOpen: false,
		rays: false,
		markers: false,
	}
}

function packView(v: ViewState): string {
	return [v.cx, v.cy, v.zoom].map(String).join(',')
}

function unpackView(raw: string | null, fallback: ViewState): ViewState {
	if (!raw) return { ...fallback }
	const parts = raw.split(',').map(Number)
	if (parts.length !== 3 || parts.some((p) => !Number.isFinite(p))) {
		return { ...fallback }
	}
	return { cx: parts[0], cy: parts[1], zoom: parts[2] }
}

export function encodeFragment(s: ExplorerState): string {
	const q = new URLSearchParams()
	q.set('plane', s.plane)
	q.set('v', packView(s.views[s.plane]))
	if (s.lambda) {
		q.set('lam', `${s.lambda[0]},${s.lambda[1]}`)
		if (s.dynOpen) {
			q.set('dyn', '1')
			q.set('vd', packView(s.views.dyn))
		}
	}
	if (s.rays) q.set('rays', '1')
	if (s.markers) q.set('markers', '1')
	return q.toString()
}

export function decodeFragment(fragment: string): ExplorerState {
	const s = defaultState()
	const q = new URLSearchParams(fragment.replace(/^#/, ''))
	const plane = q.get('plane')
	if (plane === 'param' || plane === 'mu') s.plane = plane
	s.views[s.plane] = unpackView(q.get('v'), s.views[s.plane])
	const lam = q.get('lam')
	if (lam) {
		const parts = lam.split(',').map(Number)
		if (parts.length === 2 && parts.every(Number.isFinite)) {
			s.lambda = [parts[0], parts[1]]
			s.dynOpen = q.get('dyn') === '1'
			if (s.dynOpen) s.views.dyn = unpackView(q.get('vd'), s.views.dyn)
		}
	}
	s.rays = q.get('rays') === '1'
	s.markers = q.get('markers') === '1'
	return s
}
