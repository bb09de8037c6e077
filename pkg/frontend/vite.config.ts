import { defineConfig } from 'vitest/config'

// dev server proxies /api to a locally running `cyldyn serve`; the
// production bundle is served by that same process from its / route
export default defineConfig({
	build: {
		outDir: 'dist',
	},
	server: {
		proxy: {
			'/api': 'http://127.0.0.1:8023',
		},
	},
	test: {
		environment: 'jsdom',
	},
})
