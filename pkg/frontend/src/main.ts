import { ApiClient } from './api.js';
import { initApp } from './app.js';

declare global {
  interface Window {
    API_BASE?: string;
  }
}

const root = document.getElementById('app');
if (root) {
  initApp(root, new ApiClient(window.API_BASE ?? ''));
}
