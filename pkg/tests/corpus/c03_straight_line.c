int main()
{
    int x;
    int y;
    int z = x + 3;
    y = z * 2 - x;
    x = y - z;
    return 0;
}
