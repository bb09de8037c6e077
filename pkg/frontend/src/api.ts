import type { AnalysisRecord, Meta, RayResponse } from './types'

// every number the UI shows comes from these endpoints

export class ServiceError extends Error {
	constructor(
		public status: number,
		public body: { error?: string; message?: string },
	) {
		super(body.message ?? `service error ${status}`)
	}
	get isSingularity(): boolean {
		return this.status === 422
	}
}

export function lambdaParam(lambda: [number, number]): string {
	return `${lambda[0]},${lambda[1]}`
}

export function tileUrl(
	plane: string,
	z: number,
	x: number,
	y: number,
	lambda?: [number, number],
): string {
	const base = `/api/tile/${plane}/${z}/${x}/${y}`
	return lambda ? `${base}?lambda=${encodeURIComponent(lambdaParam(lambda))}` : base
}

async function getJson<T>(url: string): Promise<T> {
	const res = await fetch(url)
	if (!res.ok) {
		let body = {}
		try {
			body = await res.json()
		} catch {
			/* non-JSON error body */
		}
		throw new ServiceError(res.status, body)
	}
	return res.json() as Promise<T>
}

export function fetchMeta(): Promise<Meta> {
	return getJson<Meta>('/api/meta')
}

export function fetchAnalysis(lambda: [number, number]): Promise<AnalysisRecord> {
	return getJson<AnalysisRecord>(
		`/api/analyze?lambda=${encodeURIComponent(lambdaParam(lambda))}`,
	)
}

export function fetchRay(
	region: string,
	theta: number,
	k: number,
	t: number,
	samples = 64,
): Promise<RayResponse> {
	const q = new URLSearchParams({
		region,
		theta: String(theta),
		k: String(k),
		t: String(t),
		samples: String(samples),
	})
	return getJson<RayResponse>(`/api/ray?${q}`)
}
