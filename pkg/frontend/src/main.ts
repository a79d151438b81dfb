/**
 * Entry point: the service serves built assets under /ui/, so the API
 * lives on the same origin.
 */

import { ReviewApi } from './api.js';
import { initReviewApp } from './app.js';

const app = initReviewApp(document, new ReviewApi(''));
void app.loadNext();
