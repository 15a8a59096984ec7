int ok_free_once() {
    int *p = malloc(4);
    free(p);
    return 0;
}
